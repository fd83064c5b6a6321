// Explicit-formula bound on the analytic rank: sum over zeros of the Fejer
// kernel f_Delta(t) = (sin(Delta pi t)/(Delta pi t))^2 written as
// arithmetic + archimedean + conductor terms, then refined by root-number parity.
#pragma once

#include <cmath>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "ecrank/elliptic.hpp"

namespace ecrank {

enum class LocalKind { good, multiplicative, additive };

struct LocalAp {
  uint64_t p;
  long a_p;
  LocalKind kind;
};

// Analytic normalization: good p has alpha*beta = 1, alpha+beta = a_p/sqrt(p);
// multiplicative p has alpha = a_p/sqrt(p), beta = 0; additive p has none.
template <class R>
struct LocalFactor {
  uint64_t p;
  R s1, q;
};

template <class R>
LocalFactor<R> local_factor(const LocalAp& l) {
  using std::sqrt;
  using boost::multiprecision::sqrt;
  const R rp = sqrt(R(l.p));
  switch (l.kind) {
    case LocalKind::good: return {l.p, R(l.a_p) / rp, R(1)};
    case LocalKind::multiplicative: return {l.p, R(l.a_p) / rp, R(0)};
    case LocalKind::additive: break;
  }
  return {l.p, R(0), R(0)};
}

// s_0 .. s_kmax with s_k = alpha^k + beta^k.
template <class R>
std::vector<R> power_sums(const LocalFactor<R>& f, int kmax) {
  std::vector<R> s(kmax + 1);
  s[0] = 2;
  if (kmax >= 1) s[1] = f.s1;
  for (int k = 2; k <= kmax; ++k) s[k] = f.s1 * s[k - 1] - f.q * s[k - 2];
  return s;
}

// Primes p <= exp(2 pi Delta) contribute.
template <class R>
uint64_t prime_cutoff(const R& delta) {
  using std::exp;
  using std::floor;
  using boost::multiprecision::exp;
  using boost::multiprecision::floor;
  R c = floor(exp(2 * pi<R>() * delta));
  if (c > R(1e18)) throw Error(ErrorKind::budget, "prime cutoff exp(2 pi Delta) too large");
  return static_cast<uint64_t>(c.template convert_to<double>() + 0.5);
}

// g_an = -(1/(Delta pi)) sum_p log p sum_{k <= 2 Delta pi/log p} p^{-k/2} s_k (1 - k log p/(2 pi Delta)),
// summed in ascending p then k with compensated summation.
template <class R>
R arithmetic_term(const std::vector<LocalAp>& table, const R& delta) {
  using std::log;
  using std::pow;
  using std::sqrt;
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const R two_pi_delta = 2 * pi<R>() * delta;
  R sum = 0, comp = 0;
  for (const LocalAp& l : table) {
    const R lp = log(R(l.p));
    if (lp > two_pi_delta) break;
    const int kmax = static_cast<int>((two_pi_delta / lp).template convert_to<double>());
    if (kmax < 1) continue;
    auto f = local_factor<R>(l);
    auto s = power_sums(f, kmax);
    const R inv_sqrt = 1 / sqrt(R(l.p));
    R scale = 1;
    for (int k = 1; k <= kmax; ++k) {
      scale *= inv_sqrt;
      R w = 1 - k * lp / two_pi_delta;
      if (w <= 0) break;
      R term = lp * scale * s[k] * w;
      R y = term - comp;
      R t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
  }
  return -sum / (delta * pi<R>());
}

// (1/pi) Re int Gamma'/Gamma(1+it) f_Delta(t) dt, evaluated exactly:
// -gamma/(pi Delta) + (pi^2/6 - Li2(exp(-2 pi Delta)))/(2 pi^2 Delta^2).
template <class R>
R archimedean_term(const R& delta) {
  using std::exp;
  using boost::multiprecision::exp;
  const R p = pi<R>();
  const R z = exp(-2 * p * delta);
  return -euler_gamma<R>() / (p * delta) + (p * p / 6 - dilog(z)) / (2 * p * p * delta * delta);
}

template <class R>
R conductor_term(const BigInt& conductor, const R& delta) {
  using std::log;
  using boost::multiprecision::log;
  if (conductor < 1) throw Error(ErrorKind::math, "conductor must be positive");
  return (log(to_real<R>(conductor)) / 2 - log(2 * pi<R>())) / (delta * pi<R>());
}

struct AnalyticBoundParams {
  Real delta = 1;
  BigInt conductor = 1;
  std::optional<int> root_number;
  uint64_t count_budget = 10000000;  // largest p whose a_p may be counted
};

struct AnalyticBound {
  Real arithmetic, archimedean, conductor, raw;
  std::optional<long> parity_refined;
  uint64_t cutoff = 0;
};

using ApCache = std::map<uint64_t, long>;

// Local data for every prime up to cutoff; bad primes via Tate's algorithm,
// good primes from the cache when present, else by counting.
std::vector<LocalAp> local_ap_table(const EllipticCurve& e, uint64_t cutoff, const ApCache* cache,
                                    uint64_t count_budget);

// Largest integer <= raw with (-1)^value = root_number.
std::optional<long> parity_refine(const Real& raw, std::optional<int> root_number);

AnalyticBound analytic_rank_bound(const EllipticCurve& e, const AnalyticBoundParams& params,
                                  const ApCache* cache = nullptr);

// "p a_p" per line, ascending p; '#' comments allowed.
ApCache read_ap_cache(std::istream& in);
void write_ap_cache(std::ostream& out, const ApCache& cache);

}  // namespace ecrank
