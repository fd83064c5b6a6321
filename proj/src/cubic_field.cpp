#include "ecrank/cubic_field.hpp"

#include <algorithm>
#include <thread>

namespace ecrank {

BigInt disc(const Cubic& f) {
  const BigInt &a = f[0], &b = f[1], &c = f[2], &d = f[3];
  BigInt D = 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
  if (D == 0) throw Error(ErrorKind::math, "binary cubic form has zero discriminant");
  return D;
}

namespace {

// Homogeneous polynomial in X, Y as coefficients of X^n, X^{n-1}Y, ..., Y^n.
using Homog = std::vector<BigInt>;

Homog mul(const Homog& u, const Homog& v) {
  Homog w(u.size() + v.size() - 1, 0);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) w[i + j] += u[i] * v[j];
  return w;
}

}  // namespace

Cubic substitute(const Cubic& f, const Transform& m) {
  const Homog x{m.p, m.q}, y{m.r, m.s};
  const Homog x2 = mul(x, x), y2 = mul(y, y);
  const Homog terms[4] = {mul(x2, x), mul(x2, y), mul(x, y2), mul(y2, y)};
  Cubic g{0, 0, 0, 0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[j] += f[i] * terms[i][j];
  return g;
}

Transform compose(const Transform& a, const Transform& b) {
  return {a.p * b.p + a.q * b.r, a.p * b.q + a.q * b.s, a.r * b.p + a.s * b.r, a.r * b.q + a.s * b.s};
}

namespace {

struct Quad {
  RealWide A, B, C;
};

Quad covariant(const Cubic& f, bool positive) {
  const BigInt &a = f[0], &b = f[1], &c = f[2], &d = f[3];
  if (positive) {
    return {to_real<RealWide>(b * b - 3 * a * c), to_real<RealWide>(b * c - 9 * a * d),
            to_real<RealWide>(c * c - 3 * b * d)};
  }
  // Julia: (X - tY)^2 + 2u (X - zY)(X - conj(z)Y), u = |t - z|^2 / |z - conj(z)|^2.
  CubicRoots rt = cubic_roots(f);
  const RealWide& t = rt.real.at(0);
  const RealWide dr = t - rt.re;
  const RealWide u = (dr * dr + rt.im * rt.im) / (4 * rt.im * rt.im);
  return {1 + 2 * u, -2 * t - 4 * u * rt.re, t * t + 2 * u * (rt.re * rt.re + rt.im * rt.im)};
}

bool close(const RealWide& x, const RealWide& y) {
  static const RealWide eps("1e-60");
  return abs(x - y) <= eps * (abs(x) + abs(y));
}

Transform normalizer(const Cubic& f) {
  Transform t;
  Cubic g = f;
  if (g[0] < 0) {
    t = compose(t, Transform{-1, 0, 0, -1});
    g = substitute(f, t);
  }
  if (g[1] < 0 || (g[1] == 0 && g[3] < 0)) t = compose(t, Transform{1, 0, 0, -1});
  return t;
}

bool lex_less(const Cubic& x, const Cubic& y) {
  for (int i = 0; i < 4; ++i) {
    int c = cmp(abs(x[i]), abs(y[i]));
    if (c != 0) return c < 0;
  }
  for (int i = 0; i < 4; ++i)
    if (x[i] != y[i]) return x[i] > y[i];
  return false;
}

}  // namespace

ReducedForm julia_reduce_tracked(const Cubic& f) {
  if (rational_root(f)) throw Error(ErrorKind::math, "cannot reduce a reducible cubic form");
  const bool positive = disc(f) > 0;
  Transform total;
  Cubic g = f;
  for (int iter = 0;; ++iter) {
    if (iter > 10000) throw Error(ErrorKind::math, "Julia reduction did not converge");
    Quad q = covariant(g, positive);
    Transform step;
    if (abs(q.B) > q.A && !close(abs(q.B), q.A)) {
      RealWide k = round(-q.B / (2 * q.A));
      step = Transform{1, BigInt(k.convert_to<boost::multiprecision::cpp_int>().str()), 0, 1};
    } else if (q.A > q.C && !close(q.A, q.C)) {
      step = Transform{0, 1, 1, 0};
    } else {
      // Reduced; resolve boundary ties among the equivalent reduced forms.
      std::vector<Transform> cand{Transform{}};
      if (close(q.A, q.C)) cand.push_back(Transform{0, 1, 1, 0});
      if (close(abs(q.B), q.A)) {
        cand.push_back(Transform{1, 1, 0, 1});
        cand.push_back(Transform{1, -1, 0, 1});
      }
      ReducedForm best{{}, {}};
      bool have = false;
      for (auto& c : cand) {
        Transform t = compose(total, c);
        Cubic h = substitute(f, t);
        t = compose(t, normalizer(h));
        h = substitute(f, t);
        if (!have || lex_less(h, best.form)) {
          best = ReducedForm{h, t};
          have = true;
        }
      }
      return best;
    }
    total = compose(total, step);
    g = substitute(f, total);
  }
}

CubicField field_from_form(const Cubic& f) {
  CubicField k;
  k.form = f;
  k.disc = disc(f);
  if (k.disc > 0)
    k.r1 = 3, k.r2 = 0;
  else
    k.r1 = 1, k.r2 = 1;
  return k;
}

namespace {

bool all_divisible(const Cubic& f, const BigInt& q) {
  for (auto& c : f)
    if (!mpz_divisible_p(c.get_mpz_t(), q.get_mpz_t())) return false;
  return true;
}

// One index-reducing step at q, if the ring is not maximal there.
std::optional<Cubic> index_step(const Cubic& f, const BigInt& q) {
  if (all_divisible(f, q)) return Cubic{f[0] / q, f[1] / q, f[2] / q, f[3] / q};
  const BigInt q2 = q * q;
  for (const ProjRoot& r : roots_mod_p(f, q)) {
    if (r.mult < 2) continue;
    Cubic g = f;
    if (!r.at_infinity()) g = substitute(f, Transform{BigInt(static_cast<unsigned long>(r.r)), 1, 1, 0});
    if (mpz_divisible_p(g[0].get_mpz_t(), q2.get_mpz_t()) && mpz_divisible_p(g[1].get_mpz_t(), q.get_mpz_t()))
      return Cubic{g[0] / q2, g[1] / q, g[2], g[3] * q};
  }
  return std::nullopt;
}

Cubic remove_index(Cubic f, const BigInt& q) {
  while (auto g = index_step(f, q)) f = *g;
  return f;
}

}  // namespace

bool is_maximal_at(const Cubic& f, const BigInt& q) { return !index_step(f, q).has_value(); }

CubicField maximalize(const Cubic& f, const std::vector<std::pair<BigInt, int>>& factored_disc) {
  BigInt d = abs(disc(f)), prod = 1;
  std::vector<BigInt> square;
  for (auto& [q, e] : factored_disc) {
    if (!is_prime(q)) throw Error(ErrorKind::data, "factorization entry " + q.get_str() + " is not prime");
    BigInt qe;
    mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(e));
    prod *= qe;
    if (e >= 2) square.push_back(q);
  }
  if (prod != d) throw Error(ErrorKind::data, "incomplete factorization of the form discriminant");
  return maximalize_at(f, square);
}

CubicField maximalize_at(const Cubic& f, const std::vector<BigInt>& primes) {
  Cubic g = f;
  for (auto& q : primes) g = remove_index(g, q);
  return field_from_form(julia_reduce(g));
}

BigInt bach_bound(const CubicField& k) {
  Real l = log(to_real<Real>(abs(k.disc)));
  Real b = floor(12 * l * l);
  return BigInt(b.convert_to<boost::multiprecision::cpp_int>().str());
}

std::optional<std::size_t> FactorBase::column(uint64_t p, uint64_t r, uint64_t s) const {
  const uint64_t key = root_key(p, r, s);
  auto it = std::lower_bound(primes.begin(), primes.end(), std::make_pair(p, key),
                             [](const FactorBasePrime& x, const std::pair<uint64_t, uint64_t>& k) {
                               return std::make_pair(x.p, root_key(x.p, x.r, x.s)) < k;
                             });
  if (it == primes.end() || it->p != p || root_key(it->p, it->r, it->s) != key) return std::nullopt;
  return static_cast<std::size_t>(it - primes.begin());
}

std::pair<std::size_t, std::size_t> FactorBase::range(uint64_t p) const {
  auto lo = std::lower_bound(primes.begin(), primes.end(), p,
                             [](const FactorBasePrime& x, uint64_t v) { return x.p < v; });
  auto hi = std::upper_bound(lo, primes.end(), p, [](uint64_t v, const FactorBasePrime& x) { return v < x.p; });
  return {static_cast<std::size_t>(lo - primes.begin()), static_cast<std::size_t>(hi - primes.begin())};
}

namespace {

std::vector<FactorBasePrime> primes_over(const Cubic& f, uint64_t p) {
  std::vector<FactorBasePrime> out;
  for (const ProjRoot& rt : roots_mod_p(f, p)) {
    FactorBasePrime fp{p, rt.r, rt.s, rt.mult >= 2, 0};
    if (rt.at_infinity())
      fp.alpha_valuation = -valuation(f[0], p);
    else if (rt.r == 0)
      fp.alpha_valuation = valuation(f[3], p);
    out.push_back(fp);
  }
  return out;
}

}  // namespace

void index_factor_base(FactorBase& fb) {
  fb.infinite_columns.clear();
  for (std::size_t i = 0; i < fb.primes.size(); ++i)
    if (fb.primes[i].s == 0) fb.infinite_columns.push_back(i);
}

FactorBase build_factor_base(const CubicField& k, const BigInt& bound, unsigned threads) {
  if (bound < 2) throw Error(ErrorKind::usage, "factor-base bound must be at least 2");
  if (!bound.fits_ulong_p()) throw Error(ErrorKind::budget, "factor-base bound too large");
  FactorBase fb{k, bound, {}, {}};
  const auto ps = primes_below(bound.get_ui());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, ps.size() / 1000)));
  std::vector<std::vector<FactorBasePrime>> parts(threads);
  auto work = [&](unsigned w) {
    const std::size_t lo = ps.size() * w / threads, hi = ps.size() * (w + 1) / threads;
    for (std::size_t i = lo; i < hi; ++i)
      for (auto& fp : primes_over(k.form, ps[i])) parts[w].push_back(fp);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& part : parts) fb.primes.insert(fb.primes.end(), part.begin(), part.end());
  index_factor_base(fb);
  return fb;
}

}  // namespace ecrank
