#include "ecrank/sieve_planner.hpp"

#include <algorithm>
#include <cmath>

#include "ecrank/cubic_field.hpp"

namespace ecrank {

Real choose_skew_log2(const Cubic& f) {
  // Lines y = l_i + k_i t for the nonzero coefficients c_i (i = power of X).
  std::vector<std::pair<Real, Real>> lines;
  for (int i = 0; i < 4; ++i) {
    const BigInt& c = f[3 - i];
    if (c == 0) continue;
    lines.push_back({log(to_real<Real>(abs(c))) / log(Real(2)), Real(2 * i - 3) / 2});
  }
  bool have = false;
  Real best_t = 0, best_m = 0;
  for (auto& [li, ki] : lines)
    for (auto& [lj, kj] : lines) {
      if (!(ki < 0 && kj > 0)) continue;
      Real t = (li - lj) / (kj - ki);
      Real m = li + ki * t;
      for (auto& [l, k] : lines) m = std::max(m, Real(l + k * t));
      if (!have || m < best_m) {
        best_t = t;
        best_m = m;
        have = true;
      }
    }
  if (!have) throw Error(ErrorKind::math, "choose_skew: form needs nonzero c3 and c0");
  return best_t;
}

namespace {

using Poly = std::vector<BigInt>;  // low to high

// g(r + p t) as a polynomial in t.
Poly shift_scale(const Poly& g, const BigInt& r, const BigInt& p) {
  Poly out(g.size(), 0);
  // Horner in the variable (r + p t).
  for (std::size_t k = g.size(); k-- > 0;) {
    Poly next(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      next[i] += out[i] * r;
      if (i + 1 < g.size()) next[i + 1] += out[i] * p;
    }
    next[0] += g[k];
    out = next;
  }
  return out;
}

// E[v_p(g(x))] for x uniform in Z_p, truncated once p^depth exceeds 2^64.
Real mean_valuation(Poly g, uint64_t p, int depth) {
  int content = -1;
  for (auto& c : g)
    if (c != 0) {
      int v = valuation(c, p);
      content = content < 0 ? v : std::min(content, v);
    }
  if (content < 0) throw Error(ErrorKind::math, "mean_valuation: zero polynomial");
  if (content > 0) {
    BigInt pc;
    mpz_ui_pow_ui(pc.get_mpz_t(), p, static_cast<unsigned long>(content));
    for (auto& c : g) c /= pc;
  }
  Real e = content;
  if (depth <= 0) return e;
  Cubic asform{0, 0, 0, 0};
  for (std::size_t i = 0; i < g.size() && i < 4; ++i) asform[3 - i] = g[i];
  // Pad to a cubic in X with Y = 1; a lower degree shows up as a root at infinity.
  Real sub = 0;
  for (const ProjRoot& r : roots_mod_p(asform, p)) {
    if (r.at_infinity()) continue;
    sub += mean_valuation(shift_scale(g, BigInt(static_cast<unsigned long>(r.r)), BigInt(static_cast<unsigned long>(p))),
                          p, depth - 1);
  }
  return e + sub / p;
}

int depth_for(uint64_t p) { return static_cast<int>(64 / std::log2(static_cast<double>(p))) + 1; }

}  // namespace

Real expected_valuation(const Cubic& f, uint64_t p) {
  const BigInt P = static_cast<unsigned long>(p);
  Poly affine{f[3], f[2], f[1], f[0]};
  Poly infinite{f[0], f[1] * P, f[2] * P * P, f[3] * P * P * P};
  const int d = depth_for(p);
  return (Real(p) * mean_valuation(affine, p, d) + mean_valuation(infinite, p, d)) / (p + 1);
}

Real murphy_alpha(const Cubic& f, uint64_t prime_cutoff) {
  const BigInt D = disc(f);
  Real sum = 0;
  for (uint64_t p : primes_in(2, prime_cutoff + 1)) {
    Real e;
    if (mpz_divisible_ui_p(D.get_mpz_t(), p))
      e = expected_valuation(f, p);
    else
      e = Real(roots_mod_p(f, p).size()) * p / (Real(p) * p - 1);
    sum += log(Real(p)) * (Real(1) / (p - 1) - e);
  }
  return sum;
}

std::pair<BigInt, BigInt> region_sides(const Real& log2_skew, const Real& region_bits) {
  auto side = [](const Real& bits) {
    Real v = round(pow(Real(2), bits));
    BigInt b(v.convert_to<boost::multiprecision::cpp_int>().str());
    return b < 1 ? BigInt(1) : b;
  };
  return {side((region_bits - 1 + log2_skew) / 2), side((region_bits - 1 - log2_skew) / 2)};
}

Real max_norm_bits(const Cubic& f, const Real& log2_skew, const Real& region_bits) {
  using LD = long double;
  const LD A = std::exp2(static_cast<LD>(((region_bits - 1 + log2_skew) / 2).convert_to<double>()));
  const LD B = std::exp2(static_cast<LD>(((region_bits - 1 - log2_skew) / 2).convert_to<double>()));
  LD c[4];
  for (int i = 0; i < 4; ++i) c[i] = to_real<Real>(f[i]).convert_to<LD>();
  auto F = [&](LD a, LD b) { return std::fabs(((c[0] * a + c[1] * b) * a + c[2] * b * b) * a + c[3] * b * b * b); };
  const int n = 100000;
  LD best = 0;
  for (int i = 0; i <= n; ++i) {
    LD u = static_cast<LD>(i) / n;
    best = std::max({best, F(-A + 2 * A * u, B), F(A, B * u), F(-A, B * u)});
  }
  return Real(static_cast<double>(std::log2(best)));
}

Real term_sum_bits(const Cubic& f, const Real& log2_skew, const Real& region_bits) {
  const Real lA = (region_bits - 1 + log2_skew) / 2, lB = (region_bits - 1 - log2_skew) / 2;
  const Real ln2 = log(Real(2));
  Real sum = 0;
  for (int i = 0; i < 4; ++i) {
    const BigInt& c = f[3 - i];
    if (c != 0) sum += exp(log(to_real<Real>(abs(c))) + (lA * i + lB * (3 - i)) * ln2);
  }
  return log(sum) / ln2;
}

SievePlan table1_exact_plan(const Real& region_bits) {
  SievePlan p;
  p.region_bits = region_bits;
  p.log2_skew = Real("41.25");
  std::tie(p.A, p.B) = region_sides(p.log2_skew, region_bits);
  p.smoothness_bound = 1202639;
  p.alpha = Real("-1.9") * log(Real(2));
  p.base_bits = Real("42.25");
  p.base_norm_bits = Real("174.6");
  p.log2_bound = Real("20.2");
  p.predicted_relations = estimate_relations(p);
  return p;
}

SievePlan self_plan(const Cubic& f, const BigInt& bound, const Real& region_bits, const Real& base_bits,
                    uint64_t alpha_cutoff) {
  if (bound < 2) throw Error(ErrorKind::usage, "smoothness bound must be at least 2");
  SievePlan p;
  p.region_bits = region_bits;
  p.log2_skew = choose_skew_log2(f);
  std::tie(p.A, p.B) = region_sides(p.log2_skew, region_bits);
  p.smoothness_bound = bound;
  p.alpha = murphy_alpha(f, alpha_cutoff);
  p.base_bits = base_bits;
  p.base_norm_bits = term_sum_bits(f, p.log2_skew, base_bits) + nats_to_bits(p.alpha);
  p.log2_bound = log(to_real<Real>(bound)) / log(Real(2));
  p.predicted_relations = estimate_relations(p);
  return p;
}

Real estimate_relations(const SievePlan& plan, const Real& shell) {
  if (shell <= 0) throw Error(ErrorKind::usage, "shell width must be positive");
  if (plan.region_bits < plan.base_bits) throw Error(ErrorKind::usage, "region smaller than the base region");
  const Real span = (plan.region_bits - plan.base_bits) / shell;
  const long k = static_cast<long>(floor(span + Real("1e-30")).convert_to<double>());
  auto rho_at = [&](const Real& width) {
    return dickman_rho((plan.base_norm_bits + Real(3) / 2 * width) / plan.log2_bound);
  };
  Real total = pow(Real(2), plan.base_bits) * rho_at(0);
  for (long i = 1; i <= k; ++i) {
    Real beta = pow(Real(2), plan.base_bits + shell * i) - pow(Real(2), plan.base_bits + shell * (i - 1));
    total += beta * rho_at(shell * i);
  }
  const Real inner = plan.base_bits + shell * k;
  if (plan.region_bits - inner > Real("1e-30"))
    total += (pow(Real(2), plan.region_bits) - pow(Real(2), inner)) * rho_at(plan.region_bits - plan.base_bits);
  const Real zeta2 = pi<Real>() * pi<Real>() / 6;
  return total / zeta2;
}

}  // namespace ecrank
