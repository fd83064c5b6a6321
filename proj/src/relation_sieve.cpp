#include "ecrank/relation_sieve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

namespace ecrank {

std::string to_string(RelationSource s) {
  switch (s) {
    case RelationSource::sieved: return "sieved";
    case RelationSource::rational: return "rational";
    case RelationSource::targeted: return "targeted";
  }
  return "?";
}

namespace {

using u128 = unsigned __int128;

struct SievePrime {
  uint64_t p;
  uint8_t logp;
  std::vector<uint64_t> affine;  // roots r of F(x,1)
  bool infinite = false;         // (1:0) is a root
};

std::vector<SievePrime> sieve_primes(const FactorBase& fb) {
  std::vector<SievePrime> out;
  for (auto& fp : fb.primes) {
    if (out.empty() || out.back().p != fp.p) {
      double l = std::round(std::log2(static_cast<double>(fp.p)));
      out.push_back({fp.p, static_cast<uint8_t>(std::max(1.0, l)), {}, false});
    }
    if (fp.s == 0)
      out.back().infinite = true;
    else
      out.back().affine.push_back(fp.r);
  }
  return out;
}

// phi(a) = F(a,-b) = c3 a^3 - c2 b a^2 + c1 b^2 a - c0 b^3 modulo m < 2^62.
struct LineForm {
  uint64_t m, k[4];  // k[i] is the coefficient of a^(3-i) mod m
  LineForm(const Cubic& f, int64_t b, uint64_t mod) : m(mod) {
    BigInt bb = b;
    BigInt c[4] = {f[0], -f[1] * bb, f[2] * bb * bb, -f[3] * bb * bb * bb};
    for (int i = 0; i < 4; ++i) k[i] = mod_u64(c[i], m);
  }
  uint64_t operator()(uint64_t a) const {
    u128 v = k[0];
    for (int i = 1; i < 4; ++i) v = (v * a + k[i]) % m;
    return static_cast<uint64_t>(v);
  }
};

// Residues a mod p^k with p^k | F(a,-b), k = 2, 3, ... while p^k <= cap and
// the residue set stays small; each level is returned with its modulus.
std::vector<std::pair<uint64_t, std::vector<uint64_t>>> lifted_roots(const Cubic& f, int64_t b, uint64_t p,
                                                                     const std::vector<uint64_t>& level1,
                                                                     uint64_t cap) {
  std::vector<std::pair<uint64_t, std::vector<uint64_t>>> out;
  std::vector<uint64_t> cur = level1;
  uint64_t pk = p;
  while (!cur.empty() && pk <= cap / p) {
    const uint64_t next_mod = pk * p;
    LineForm phi(f, b, next_mod);
    std::vector<uint64_t> nxt;
    for (uint64_t x : cur)
      for (uint64_t t = 0; t < p; ++t) {
        uint64_t y = x + t * pk;
        if (phi(y) == 0) nxt.push_back(y);
      }
    if (nxt.size() > 4096) break;
    pk = next_mod;
    cur = std::move(nxt);
    out.push_back({pk, cur});
  }
  return out;
}

uint64_t pos_mod(int64_t x, uint64_t m) {
  int64_t r = static_cast<int64_t>(static_cast<uint64_t>(x < 0 ? -(x + 1) : x) % m);
  if (x < 0) r = static_cast<int64_t>(m) - 1 - r;
  return static_cast<uint64_t>(r);
}

struct Progression {
  uint64_t mod;
  uint64_t residue;
  uint8_t logp;
};

// All progressions hitting the line b.
std::vector<Progression> line_progressions(const FactorBase& fb, const std::vector<SievePrime>& sp, int64_t b,
                                           const SieveParams& prm) {
  std::vector<Progression> out;
  const Cubic& f = fb.field.form;
  const uint64_t span = static_cast<uint64_t>(2 * prm.A + 1);
  for (auto& s : sp) {
    const uint64_t bp = pos_mod(b, s.p);
    std::vector<uint64_t> level1;
    if (bp == 0) {
      if (s.infinite)
        for (uint64_t x = 0; x < s.p; ++x) level1.push_back(x);
    } else {
      // (a : -b) = (r : 1)  <=>  a = -b r.
      const uint64_t nb = s.p - bp;
      for (uint64_t r : s.affine) level1.push_back(mulmod(nb, r, s.p));
    }
    if (level1.size() == s.p) {
      out.push_back({1, 0, s.logp});
    } else {
      for (uint64_t x : level1) out.push_back({s.p, x, s.logp});
    }
    if (s.p < prm.power_cutoff && !level1.empty()) {
      const uint64_t cap = std::max<uint64_t>(span, uint64_t(1) << 40);
      for (auto& [pk, roots] : lifted_roots(f, b, s.p, level1, cap))
        for (uint64_t x : roots) out.push_back({pk, x, s.logp});
    }
  }
  return out;
}

void check_c3(const FactorBase& fb) {
  BigInt rest = abs(fb.field.form[0]);
  for (std::size_t c : fb.infinite_columns) {
    const uint64_t p = fb.primes[c].p;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
  }
  if (rest != 1)
    throw Error(ErrorKind::data, "leading coefficient has a prime factor outside the factor base; raise the bound");
}

}  // namespace

std::vector<std::pair<int64_t, int64_t>> line_sieve(const FactorBase& fb, const SieveParams& prm) {
  if (prm.A < 1 || prm.b_lo < 1 || prm.b_hi < prm.b_lo) throw Error(ErrorKind::usage, "sieve region needs A >= 1 and 1 <= b_lo <= b_hi");
  if (prm.A > (int64_t(1) << 61)) throw Error(ErrorKind::budget, "sieve bound A too large");
  if (prm.segment == 0) throw Error(ErrorKind::usage, "segment size must be positive");
  if (prm.segment > prm.memory_budget)
    throw Error(ErrorKind::budget, "sieve segment exceeds the memory budget; use a smaller segment");
  std::vector<std::pair<int64_t, int64_t>> found;
  if (fb.primes.empty()) return found;
  const auto sp = sieve_primes(fb);
  const Cubic& f = fb.field.form;
  long double c[4];
  for (int i = 0; i < 4; ++i) c[i] = to_real<Real>(f[i]).convert_to<long double>();

  struct Unit {
    int64_t b, a0, len;
  };
  std::vector<Unit> units;
  const int64_t width = 2 * prm.A + 1;
  for (int64_t b = prm.b_lo; b <= prm.b_hi; ++b)
    for (int64_t off = 0; off < width; off += static_cast<int64_t>(prm.segment))
      units.push_back({b, -prm.A + off, std::min<int64_t>(static_cast<int64_t>(prm.segment), width - off)});

  std::vector<std::vector<std::pair<int64_t, int64_t>>> results(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<uint8_t> acc;
    int64_t cached_b = 0;
    std::vector<Progression> prog;
    for (;;) {
      const std::size_t u = next++;
      if (u >= units.size()) return;
      const Unit& un = units[u];
      if (prog.empty() || cached_b != un.b) {
        prog = line_progressions(fb, sp, un.b, prm);
        cached_b = un.b;
      }
      acc.assign(static_cast<std::size_t>(un.len), 0);
      for (auto& pr : prog) {
        uint64_t start = (pr.residue + pr.mod - pos_mod(un.a0, pr.mod)) % pr.mod;
        for (uint64_t i = start; i < static_cast<uint64_t>(un.len); i += pr.mod) {
          unsigned v = acc[i] + pr.logp;
          acc[i] = static_cast<uint8_t>(std::min(v, 255u));
        }
      }
      const long double bb = static_cast<long double>(un.b);
      for (int64_t i = 0; i < un.len; ++i) {
        const int64_t a = un.a0 + i;
        if (std::gcd(a < 0 ? -a : a, un.b) != 1) continue;
        const long double x = static_cast<long double>(a);
        long double t[4] = {c[0] * x * x * x, -c[1] * x * x * bb, c[2] * x * bb * bb, -c[3] * bb * bb * bb};
        long double val = std::fabs(t[0] + t[1] + t[2] + t[3]);
        long double err = 1e-16L * (std::fabs(t[0]) + std::fabs(t[1]) + std::fabs(t[2]) + std::fabs(t[3]));
        long double lower = val - err;
        long double need = lower <= 1 ? 0 : std::log2(lower) - prm.threshold_bits;
        if (acc[static_cast<std::size_t>(i)] >= need) results[u].push_back({a, un.b});
      }
    }
  };
  unsigned threads = prm.threads ? prm.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, units.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& r : results) found.insert(found.end(), r.begin(), r.end());
  return found;
}

std::optional<Relation> trial_factor(const FactorBase& fb, const BigInt& a_in, const BigInt& b_in) {
  BigInt a = a_in, b = b_in;
  if (b < 0 || (b == 0 && a < 0)) {
    a = -a;
    b = -b;
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1) return std::nullopt;
  if (b == 0) return std::nullopt;  // only a = 1 here, the unit ideal; rational relations use p
  check_c3(fb);
  const Cubic& f = fb.field.form;
  BigInt n = abs(eval_form(f, a, -b));
  std::map<uint32_t, int> exps;
  uint64_t last = 0;
  for (auto& fp : fb.primes) {
    if (fp.p == last) continue;
    last = fp.p;
    if (!mpz_divisible_ui_p(n.get_mpz_t(), fp.p)) continue;
    int v = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), fp.p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), fp.p);
      ++v;
    }
    const uint64_t bp = mod_u64(b, fp.p);
    std::optional<std::size_t> col;
    if (bp == 0)
      col = fb.column(fp.p, 1, 0);
    else
      col = fb.column(fp.p, mulmod(mod_u64(a, fp.p), invmod(fp.p - bp, fp.p), fp.p), 1);
    if (!col) throw Error(ErrorKind::math, "prime divides the norm but no root matches");
    exps[static_cast<uint32_t>(*col)] += v;
  }
  if (n != 1) return std::nullopt;
  for (std::size_t ccol : fb.infinite_columns)
    exps[static_cast<uint32_t>(ccol)] -= valuation(f[0], fb.primes[ccol].p);
  Relation r{a, b, {}, RelationSource::sieved};
  for (auto& [k, e] : exps)
    if (e != 0) r.exps.push_back({k, e});
  return r;
}

std::vector<Relation> sieve_relations(const FactorBase& fb, const SieveParams& prm) {
  std::vector<Relation> out;
  for (auto& [a, b] : line_sieve(fb, prm))
    if (auto r = trial_factor(fb, a, b)) out.push_back(std::move(*r));
  dedupe(out);
  return out;
}

std::vector<Relation> rational_relations(const FactorBase& fb, uint64_t limit) {
  if (limit > fb.bound) throw Error(ErrorKind::usage, "rational relation limit exceeds the factor-base bound");
  std::vector<Relation> out;
  const Cubic& f = fb.field.form;
  uint64_t last = 0;
  for (auto& fp : fb.primes) {
    if (fp.p == last || fp.p >= limit) continue;
    last = fp.p;
    auto roots = roots_mod_p(f, fp.p);
    int total = 0;
    for (auto& rt : roots) total += rt.mult;
    if (total != 3) continue;
    Relation r{BigInt(static_cast<unsigned long>(fp.p)), 0, {}, RelationSource::rational};
    for (auto& rt : roots) {
      auto col = fb.column(fp.p, rt.r, rt.s);
      if (!col) throw Error(ErrorKind::data, "factor base is missing a degree-one prime");
      r.exps.push_back({static_cast<uint32_t>(*col), rt.mult});
    }
    std::sort(r.exps.begin(), r.exps.end());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Relation> targeted_relations(const FactorBase& fb, uint64_t p, std::size_t count, int64_t start_A,
                                         int64_t max_A) {
  if (count == 0) return {};
  for (int64_t A = std::max<int64_t>(start_A, 1);; A *= 2) {
    if (A > max_A)
      throw Error(ErrorKind::budget, "no " + std::to_string(count) + " relations on the line b = " + std::to_string(p) +
                                         " within |a| <= " + std::to_string(max_A) + "; enlarge the region");
    SieveParams prm;
    prm.A = A;
    prm.b_lo = prm.b_hi = static_cast<int64_t>(p);
    prm.segment = static_cast<std::size_t>(std::min<int64_t>(2 * A + 1, int64_t(1) << 24));
    prm.threads = 1;
    auto rels = sieve_relations(fb, prm);
    if (rels.size() >= count) {
      std::stable_sort(rels.begin(), rels.end(), [](const Relation& x, const Relation& y) {
        return cmp(abs(x.a), abs(y.a)) < 0 || (abs(x.a) == abs(y.a) && x.a > y.a);
      });
      rels.resize(count);
      for (auto& r : rels) r.source = RelationSource::targeted;
      return rels;
    }
  }
}

bool norm_identity_holds(const FactorBase& fb, const Relation& r) {
  const Cubic& f = fb.field.form;
  BigInt n = abs(eval_form(f, r.a, -r.b));
  BigInt num = 1, den = 1;
  for (auto& [c, e] : r.exps) {
    if (c >= fb.primes.size()) return false;
    BigInt pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), fb.primes[c].p, static_cast<unsigned long>(std::abs(e)));
    if (e > 0)
      num *= pe;
    else
      den *= pe;
  }
  return num * abs(f[0]) == n * den;
}

void dedupe(std::vector<Relation>& rels) {
  std::stable_sort(rels.begin(), rels.end(), [](const Relation& x, const Relation& y) {
    int cb = cmp(x.b, y.b);
    return cb < 0 || (cb == 0 && x.a < y.a);
  });
  rels.erase(std::unique(rels.begin(), rels.end(),
                         [](const Relation& x, const Relation& y) { return x.a == y.a && x.b == y.b; }),
             rels.end());
}

}  // namespace ecrank
