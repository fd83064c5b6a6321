#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ecrank/cubic_field.hpp"
#include "ecrank/sieve_planner.hpp"
#include "record_data.hpp"

using namespace ecrank;

namespace {

Cubic form_of(int r) {
  auto& f = fixtures::form(r).c;
  return {BigInt(f[0]), BigInt(f[1]), BigInt(f[2]), BigInt(f[3])};
}

double d(const Real& x) { return x.convert_to<double>(); }

// Mean of min(v_p(F(a,b)), k) over pairs mod p^k not both divisible by p.
double brute_mean_valuation(const Cubic& f, long p, int k) {
  long q = 1;
  for (int i = 0; i < k; ++i) q *= p;
  double total = 0;
  long count = 0;
  for (long a = 0; a < q; ++a)
    for (long b = 0; b < q; ++b) {
      if (a % p == 0 && b % p == 0) continue;
      BigInt v = eval_form(f, a, b);
      int j = 0;
      while (j < k && mpz_divisible_ui_p(v.get_mpz_t(), p)) {
        v /= p;
        ++j;
      }
      total += j;
      ++count;
    }
  return total / count;
}

}  // namespace

TEST_CASE("choose_skew") {
  CHECK(std::abs(d(choose_skew_log2(form_of(28))) - 41.25) <= 0.25);
  CHECK(std::abs(d(choose_skew_log2(form_of(27))) - 26.625) <= 0.25);
  CHECK(std::abs(d(choose_skew_log2(Cubic{7, 1000, 1000, 7}))) < 1e-30);
  CHECK(std::abs(d(choose_skew(Cubic{5, 3, 3, 5})) - 1) < 1e-30);
}

TEST_CASE("boundary sizes at the K28 base region") {
  Cubic f = form_of(28);
  const Real t("41.25"), S("42.25");
  // Two largest of log2 |c_i| A^i B^{3-i}.
  const double lA = d((S - 1 + t) / 2), lB = d((S - 1 - t) / 2);
  std::vector<double> terms;
  for (int i = 0; i < 4; ++i) terms.push_back(d(log(to_real<Real>(abs(f[3 - i])))) / std::log(2.0) + i * lA + (3 - i) * lB);
  std::sort(terms.rbegin(), terms.rend());
  CHECK(terms[0] - terms[1] <= 1.5);
  CHECK(std::abs(d(max_norm_bits(f, t, S)) - 176.5) <= 1);
  auto [A, B] = region_sides(t, S);
  Real area = log(to_real<Real>(2 * A * B)) / log(Real(2));
  CHECK(abs(area - S) <= Real("0.25"));
}

TEST_CASE("expected valuation matches enumeration") {
  std::vector<Cubic> forms{Cubic{1, 0, -1, -1}, Cubic{4, 0, -4, 1}, Cubic{8, 4, 2, 9}, Cubic{27, 9, 3, 2}};
  for (auto& f : forms)
    for (long p : {2L, 3L, 5L}) {
      const int k = p == 2 ? 9 : (p == 3 ? 6 : 4);
      double want = brute_mean_valuation(f, p, k);
      double got = d(expected_valuation(f, static_cast<uint64_t>(p)));
      INFO("p=" << p << " f=" << f[0] << "," << f[1] << "," << f[2] << "," << f[3]);
      CHECK(got >= want - 1e-12);
      CHECK(got - want <= 12 * std::pow(static_cast<double>(p), -k + 1));
    }
  // Unramified p: n_p p / (p^2 - 1).
  Cubic f{1, 0, -1, -1};
  for (uint64_t p : {5, 7, 11, 13, 59}) {
    double n = static_cast<double>(roots_mod_p(f, p).size());
    CHECK(std::abs(d(expected_valuation(f, p)) - n * p / (double(p) * p - 1)) < 1e-30);
  }
}

TEST_CASE("murphy_alpha") {
  Real a = murphy_alpha(form_of(28), 2000);
  CHECK(std::abs(d(nats_to_bits(a)) - -1.9) <= 0.4);
  // x^3 - 2 has no root mod 7 (2 is not a cube) so 7 adds log 7 / 6 > 0.
  Cubic g{1, 0, 0, -2};
  REQUIRE(roots_mod_p(g, 7).empty());
  CHECK(d(murphy_alpha(g, 7) - murphy_alpha(g, 6)) == doctest::Approx(std::log(7.0) / 6));
  // Doubling the cutoff moves alpha by a sum of independent-looking terms
  // log p (1 - n_p) p/(p^2-1); for an S3 field n_p has mean 1 and variance 1.
  Real var = 0;
  for (uint64_t p : primes_in(2001, 4001)) {
    Real w = log(Real(p)) * p / (Real(p) * p - 1);
    var += w * w;
  }
  const Real sigma = sqrt(var);
  CHECK(sigma < Real("0.05"));
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 5) {
    Cubic h{static_cast<long>(rng() % 1000) + 1, static_cast<long>(rng() % 2001) - 1000,
            static_cast<long>(rng() % 2001) - 1000, static_cast<long>(rng() % 2001) - 1000};
    if (h[3] == 0 || rational_root(h)) continue;
    BigInt D = h[1] * h[1] * h[2] * h[2] - 4 * h[0] * h[2] * h[2] * h[2] - 4 * h[1] * h[1] * h[1] * h[3] -
               27 * h[0] * h[0] * h[3] * h[3] + 18 * h[0] * h[1] * h[2] * h[3];
    if (D == 0) continue;
    ++checked;
    CHECK(abs(murphy_alpha(h, 4000) - murphy_alpha(h, 2000)) <= 3 * sigma);
  }
  CHECK(abs(murphy_alpha(form_of(28), 4000) - a) <= 3 * sigma);
}

TEST_CASE("yield table with the fixed constants") {
  for (auto& [S, want] : fixtures::kYieldTable) {
    Real got = table1_exact_plan(Real(S)).predicted_relations;
    INFO("S=" << S << " got=" << d(got));
    CHECK(std::abs(d(got) / want - 1) <= 0.02);
  }
}

TEST_CASE("yield table self-computed") {
  Cubic f = form_of(28);
  for (auto& [S, want] : fixtures::kYieldTable) {
    SievePlan plan = self_plan(f, 1202639, Real(S), Real("42.25"));
    INFO("S=" << S << " got=" << d(plan.predicted_relations));
    CHECK(std::abs(d(plan.predicted_relations) / want - 1) <= 0.15);
  }
}

TEST_CASE("estimate_relations is monotone") {
  SievePlan p = table1_exact_plan(Real(45));
  Real prev = 0;
  for (double S = 42.25; S <= 49; S += 0.1) {
    p.region_bits = S;
    Real v = estimate_relations(p);
    CHECK(v > prev);
    prev = v;
  }
  p.region_bits = 46;
  Real lo = estimate_relations(p);
  p.log2_bound += Real("0.1");
  CHECK(estimate_relations(p) > lo);
  CHECK_THROWS_AS(estimate_relations(p, Real(0)), Error);
}
