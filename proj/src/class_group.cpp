#include "ecrank/class_group.hpp"

#include <algorithm>
#include <sstream>
#include <thread>

namespace ecrank {

SparseBitMatrix relation_matrix(const FactorBase& fb, const std::vector<Relation>& rels) {
  SparseBitMatrix m(fb.primes.size());
  for (auto& r : rels) {
    std::vector<uint32_t> row;
    for (auto& [c, e] : r.exps)
      if (e % 2) row.push_back(c);
    m.add_row(std::move(row));
  }
  return m;
}

namespace {

std::vector<uint64_t> column_norms(const FactorBase& fb) {
  std::vector<uint64_t> n;
  n.reserve(fb.primes.size());
  for (auto& p : fb.primes) n.push_back(p.p);
  return n;
}

uint64_t to_u64_bound(const BigInt& b) {
  if (b < 0) throw Error(ErrorKind::usage, "negative bound");
  if (!b.fits_ulong_p()) return UINT64_MAX;
  return b.get_ui();
}

unsigned worker_count(unsigned threads, std::size_t work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, work / 256)));
}

}  // namespace

std::vector<std::size_t> empty_protected_columns(const FactorBase& fb, const std::vector<Relation>& rels,
                                                 const BigInt& protected_bound) {
  auto m = relation_matrix(fb, rels);
  auto r = prune(m, column_norms(fb), to_u64_bound(protected_bound), 2, 0);
  return r.zero_protected;
}

UpperBound upper_bound_2rank(const FactorBase& fb, const std::vector<Relation>& rels, const BigInt& protected_bound) {
  if (rels.empty()) throw Error(ErrorKind::usage, "upper_bound_2rank: no relations");
  auto m = relation_matrix(fb, rels);
  auto r = prune(m, column_norms(fb), to_u64_bound(protected_bound));
  if (!r.zero_protected.empty()) {
    auto& p = fb.primes[r.zero_protected.front()];
    throw Error(ErrorKind::math, "upper_bound_2rank: " + std::to_string(r.zero_protected.size()) +
                                     " protected column(s) without odd entries, first over p = " + std::to_string(p.p));
  }
  UpperBound out;
  out.two_rank = pruned_nullity(r);
  out.columns = fb.primes.size() - r.removed_columns.size();
  out.rows = r.kept_rows.size();
  out.removed_columns = r.removed_columns.size();
  out.removed_rows = r.removed_rows.size();
  return out;
}

std::vector<AuxPrime> auxiliary_primes(const FactorBase& fb, std::size_t count) {
  std::vector<AuxPrime> out;
  const Cubic& f = fb.field.form;
  uint64_t lo = fb.bound.fits_ulong_p() ? fb.bound.get_ui() : 0;
  if (lo == 0) throw Error(ErrorKind::usage, "auxiliary_primes: factor-base bound out of range");
  lo = std::max<uint64_t>(lo, 3);
  while (out.size() < count) {
    for (uint64_t q : primes_in(lo, lo + 4096)) {
      if (mod_u64(f[0], q) == 0 || mod_u64(fb.field.disc, q) == 0) continue;
      for (auto& rt : roots_mod_p(f, q)) {
        out.push_back({q, rt.r});
        if (out.size() == count) return out;
      }
    }
    lo += 4096;
  }
  return out;
}

std::vector<BitVector> relation_characters(const std::vector<Relation>& rels, const std::vector<AuxPrime>& primes,
                                           std::size_t& skipped, unsigned threads) {
  std::vector<BitVector> out(rels.size(), BitVector(primes.size()));
  std::vector<std::size_t> zeros(rels.size(), 0);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < primes.size(); ++j) {
        const uint64_t q = primes[j].q;
        const uint64_t v = (mod_u64(rels[i].a, q) + mulmod(mod_u64(rels[i].b, q), primes[j].r, q)) % q;
        if (v == 0) {
          ++zeros[i];
          continue;
        }
        if (legendre_additive(v, q)) out[i].set(j);
      }
  };
  const unsigned t = worker_count(threads, rels.size() * std::max<std::size_t>(1, primes.size()) / 64);
  if (t == 1) {
    work(0, rels.size());
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w) pool.emplace_back(work, rels.size() * w / t, rels.size() * (w + 1) / t);
    for (auto& th : pool) th.join();
  }
  skipped = 0;
  for (auto z : zeros) skipped += z;
  return out;
}

namespace {

// Character bits of the product over `members` of the relation elements.
BitVector combine(const std::vector<BitVector>& chars, const std::vector<std::size_t>& members, std::size_t width) {
  BitVector c(width);
  for (auto i : members) c ^= chars[i];
  return c;
}

// Greedy independent subset; returns indices into `vecs`.
std::vector<std::size_t> independent_rows(const std::vector<BitVector>& vecs) {
  std::vector<BitVector> basis;
  std::vector<std::size_t> lead, chosen;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    BitVector v = vecs[i];
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (v.get(lead[k])) v ^= basis[k];
    if (!v.any()) continue;
    const std::size_t l = v.ones().front();
    // Keep the basis reduced at every lead position.
    for (std::size_t k = 0; k < basis.size(); ++k)
      if (basis[k].get(l)) basis[k] ^= v;
    basis.push_back(std::move(v));
    lead.push_back(l);
    chosen.push_back(i);
  }
  return chosen;
}

}  // namespace

LowerBound selmer_lower_bound(const FactorBase& fb, const std::vector<Relation>& rels, std::size_t aux_primes,
                              std::size_t row_limit, unsigned threads) {
  LowerBound out;
  std::vector<Relation> used(rels.begin(),
                             rels.begin() + static_cast<long>(row_limit ? std::min(row_limit, rels.size()) : rels.size()));
  const std::size_t units = static_cast<std::size_t>(fb.field.r1 + fb.field.r2);
  auto ns = left_nullspace(relation_matrix(fb, used));
  out.candidates = ns.dim;
  if (ns.dim == 0) return out;
  if (aux_primes == 0) aux_primes = std::max<std::size_t>(16, 4 * std::min(ns.dim, fb.primes.size() + units));
  auto primes = auxiliary_primes(fb, aux_primes);
  auto rel_chars = relation_characters(used, primes, out.skipped, threads);
  std::vector<std::vector<std::size_t>> members;
  std::vector<BitVector> chars;
  for (auto& v : ns.basis) {
    members.push_back(v.ones());
    chars.push_back(combine(rel_chars, members.back(), primes.size()));
  }
  auto chosen = independent_rows(chars);
  out.selmer_rank = chosen.size();
  out.two_rank = out.selmer_rank > units ? out.selmer_rank - units : 0;
  out.certificate.primes = primes;
  for (auto i : chosen) {
    out.certificate.candidates.push_back(members[i]);
    out.certificate.characters.push_back(chars[i]);
  }
  return out;
}

bool verify_certificate(const FactorBase& fb, const std::vector<Relation>& rels, const SelmerCertificate& cert,
                        std::size_t claimed_rank) {
  if (cert.candidates.size() != cert.characters.size()) return false;
  for (auto& ap : cert.primes) {
    if (ap.q <= 2 || !is_prime(ap.q) || BigInt(static_cast<unsigned long>(ap.q)) < fb.bound) return false;
    if (eval_form(fb.field.form, BigInt(static_cast<unsigned long>(ap.r)), 1) % static_cast<unsigned long>(ap.q) != 0)
      return false;
  }
  auto m = relation_matrix(fb, rels);
  std::size_t skipped = 0;
  auto rc = relation_characters(rels, cert.primes, skipped, 1);
  for (std::size_t i = 0; i < cert.candidates.size(); ++i) {
    BitVector sel(rels.size());
    for (auto r : cert.candidates[i]) {
      if (r >= rels.size()) return false;
      sel.flip(r);
    }
    if (m.left_multiply(sel).any()) return false;  // some valuation is odd
    if (!(combine(rc, cert.candidates[i], cert.primes.size()) == cert.characters[i])) return false;
  }
  return independent_rows(cert.characters).size() == claimed_rank;
}

std::string ClassGroupReport::status() const { return lower.two_rank == upper.two_rank ? "exact (GRH)" : "range"; }

ClassGroupReport class_group_report(const CubicField& k, const PipelineParams& prm) {
  ClassGroupReport rep;
  rep.field = k;
  rep.protected_bound = prm.protected_bound > 0 ? prm.protected_bound : bach_bound(k);
  rep.smoothness_bound = prm.smoothness_bound > 0 ? prm.smoothness_bound : rep.protected_bound;
  // Norms strictly below the factor-base bound are included.
  const BigInt fb_bound = std::max(rep.smoothness_bound, BigInt(rep.protected_bound + 1));
  auto fb = build_factor_base(k, fb_bound, prm.threads);
  rep.factor_base_size = fb.primes.size();
  if (!fb_bound.fits_ulong_p()) throw Error(ErrorKind::budget, "class_group_report: smoothness bound too large");

  auto rels = rational_relations(fb, fb_bound.get_ui());
  SieveParams sp;
  sp.A = prm.A > 0 ? prm.A : 4096;
  sp.b_lo = 1;
  sp.b_hi = prm.b_hi > 0 ? prm.b_hi : 32;
  sp.threads = prm.threads;
  while (true) {
    if (sp.b_lo > sp.b_hi) throw Error(ErrorKind::usage, "class_group_report: empty sieve range");
    auto more = sieve_relations(fb, sp);
    rels.insert(rels.end(), more.begin(), more.end());
    auto empty = empty_protected_columns(fb, rels, rep.protected_bound);
    // Primes at (1:0) with v_p(c3) even only show odd exponents when p | b.
    for (auto c : empty) {
      auto& p = fb.primes[c];
      if (p.s == 0) {
        auto t = targeted_relations(fb, p.p, 4, 1024, int64_t(1) << 24);
        rels.insert(rels.end(), t.begin(), t.end());
      }
    }
    dedupe(rels);
    empty = empty_protected_columns(fb, rels, rep.protected_bound);
    if (empty.empty() && rels.size() >= fb.primes.size() + prm.excess) break;
    if (sp.b_hi >= prm.max_b)
      throw Error(ErrorKind::budget, "class_group_report: sieve height budget " + std::to_string(prm.max_b) +
                                         " reached with " + std::to_string(empty.size()) +
                                         " protected column(s) unhit");
    sp.b_lo = sp.b_hi + 1;
    sp.b_hi = std::min(prm.max_b, 2 * sp.b_hi);
  }
  rep.relations = rels.size();
  rep.upper = upper_bound_2rank(fb, rels, rep.protected_bound);
  rep.lower = selmer_lower_bound(fb, rels, prm.aux_primes, 0, prm.threads);
  if (rep.lower.two_rank > rep.upper.two_rank)
    throw Error(ErrorKind::data, "class_group_report: lower bound exceeds upper bound");
  return rep;
}

std::string format_report(const ClassGroupReport& r) {
  std::ostringstream o;
  const auto& f = r.field.form;
  o << "field " << f[0] << " " << f[1] << " " << f[2] << " " << f[3] << "  disc " << r.field.disc << "  signature ("
    << r.field.r1 << "," << r.field.r2 << ")\n";
  o << "factor base " << r.factor_base_size << " primes below " << r.smoothness_bound << ", protected bound "
    << r.protected_bound << "\n";
  o << "relations " << r.relations << ", pruned matrix " << r.upper.rows << " x " << r.upper.columns << "\n";
  o << "dim Cl(K)[2] <= " << r.upper.two_rank << " (GRH)\n";
  o << "dim Sel2(K) >= " << r.lower.selmer_rank << " from " << r.lower.candidates << " candidates and "
    << r.lower.certificate.primes.size() << " auxiliary primes\n";
  o << "dim Cl(K)[2] >= " << r.lower.two_rank << "\n";
  o << "status " << r.status() << "\n";
  o << "[report]\n";
  o << "disc=" << r.field.disc << "\n";
  o << "r1=" << r.field.r1 << "\nr2=" << r.field.r2 << "\n";
  o << "factor_base=" << r.factor_base_size << "\n";
  o << "relations=" << r.relations << "\n";
  o << "upper_2rank=" << r.upper.two_rank << "\n";
  o << "upper_conditional=GRH\n";
  o << "selmer_rank=" << r.lower.selmer_rank << "\n";
  o << "lower_2rank=" << r.lower.two_rank << "\n";
  o << "status=" << (r.status() == "range" ? "range" : "exact") << "\n";
  return o.str();
}

}  // namespace ecrank
