#include "ecrank/rank_bounds.hpp"

#include <algorithm>
#include <sstream>

namespace ecrank {

int primes_above(const CubicField& k, const BigInt& p) {
  if (!is_prime(p)) throw Error(ErrorKind::math, "primes_above: not a prime");
  if (!is_maximal_at(k.form, p)) throw Error(ErrorKind::math, "primes_above: form is not maximal at p");
  auto roots = roots_mod_p(k.form, p);
  int with_mult = 0;
  for (auto& r : roots) with_mult += r.mult;
  if (with_mult == 3) return static_cast<int>(roots.size());
  if (with_mult == 1) return 2;  // linear times irreducible quadratic
  return 1;                      // inert
}

BKTerms compute_bk_terms(const EllipticCurve& e, const std::vector<LocalReductionData>& local, const CubicField& k,
                         int g, const BigInt& residual) {
  const BigInt D = invariants(e).disc;
  BKTerms t;
  t.g = g;
  t.u = D > 0 ? 2 : 1;
  if (residual < 1) throw Error(ErrorKind::usage, "compute_bk_terms: residual must be positive");
  BigInt covered = residual;
  for (auto& ld : local) {
    const int v = valuation(D, ld.p);
    if (v == 0) continue;
    BigInt pk;
    mpz_pow_ui(pk.get_mpz_t(), ld.p.get_mpz_t(), static_cast<unsigned long>(v));
    covered *= pk;
    if (gcd(residual, ld.p) != 1)
      throw Error(ErrorKind::data, "compute_bk_terms: residual shares the prime " + ld.p.get_str());
    if (ld.type == Reduction::additive) {
      t.phi_a.push_back({ld.p, primes_above(k, ld.p)});
    } else if (ld.type != Reduction::good && ld.ord_p_disc % 2 == 0) {
      t.phi_m.push_back(ld.p);
    }
  }
  if (covered != abs(D)) {
    BigInt rest = abs(D) / gcd(abs(D), covered);
    auto pf = trial_factor_disc(rest, 100000);
    if (!pf.primes.empty())
      throw Error(ErrorKind::data, "compute_bk_terms: missing local data at p = " + pf.primes.front().first.get_str());
    throw Error(ErrorKind::data, "compute_bk_terms: discriminant part " + rest.get_str() + " is not covered");
  }
  std::sort(t.phi_m.begin(), t.phi_m.end());
  std::sort(t.phi_a.begin(), t.phi_a.end());
  t.n = static_cast<int>(t.phi_m.size());
  for (auto& [p, np] : t.phi_a) t.n += np - 1;
  return t;
}

int selmer_upper_bound(const BKTerms& t) {
  int s = t.g + t.u + t.n;
  if (t.root_number) {
    if (*t.root_number != 1 && *t.root_number != -1)
      throw Error(ErrorKind::usage, "selmer_upper_bound: root number must be +1 or -1");
    // (-1)^{dim Sel2} = root number when E(Q)[2] = 0.
    const int parity = *t.root_number == 1 ? 0 : 1;
    if (((s % 2) + 2) % 2 != parity) --s;
  }
  return s;
}

RankReport rank_report(const BKTerms& t) {
  RankReport r;
  r.raw_bound = t.g + t.u + t.n;
  r.selmer_bound = selmer_upper_bound(t);
  std::ostringstream o;
  o << "g + u + n = " << t.g << " + " << t.u << " + " << t.n << " = " << r.raw_bound << "\n";
  if (t.root_number)
    o << "root number " << (*t.root_number > 0 ? "+1" : "-1") << ": dim Sel2 <= " << r.selmer_bound << " (GRH)\n";
  else
    o << "dim Sel2 <= " << r.selmer_bound << " (GRH)\n";
  if (t.known_rank_lower) {
    r.rank_lower = *t.known_rank_lower;
    if (*r.rank_lower > r.selmer_bound)
      throw Error(ErrorKind::data, "rank_report: known rank " + std::to_string(*r.rank_lower) +
                                       " exceeds the Selmer bound " + std::to_string(r.selmer_bound));
    r.g_lower = *t.known_rank_lower - t.u - t.n;
    r.determined = *r.rank_lower == r.selmer_bound;
    o << *r.rank_lower << " <= rank <= " << r.selmer_bound << (r.determined ? ": rank determined (GRH)" : "") << "\n";
    o << "dim Cl(K)[2] >= " << std::max(0, *r.g_lower) << "\n";
  } else {
    o << "rank <= " << r.selmer_bound << " (GRH)\n";
  }
  r.text = o.str();
  return r;
}

std::string table_row(int r, const BKTerms& t) {
  std::ostringstream o;
  o << r << " " << t.g << " " << t.u << " " << t.n << " ";
  if (t.root_number)
    o << (*t.root_number > 0 ? "+1" : "-1");
  else
    o << "?";
  o << " " << selmer_upper_bound(t);
  return o.str();
}

}  // namespace ecrank
