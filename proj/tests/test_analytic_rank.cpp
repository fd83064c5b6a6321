#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "ecrank/analytic_rank.hpp"
#include "oracles/explicit_formula.hpp"

using namespace ecrank;

namespace {

const EllipticCurve k11{0, -1, 1, 0, 0};
const EllipticCurve k37{0, 0, 1, -1, 0};
const EllipticCurve k389{0, 1, 1, -2, 0};

}  // namespace

TEST_CASE("power_sums") {
  auto add = power_sums(LocalFactor<Real>{7, 0, 0}, 5);
  for (int k = 1; k <= 5; ++k) CHECK(add[k] == 0);
  auto zero_ap = power_sums(local_factor<Real>(LocalAp{13, 0, LocalKind::good}), 4);
  CHECK(zero_ap[1] == 0);
  CHECK(zero_ap[2] == -2);
  CHECK(zero_ap[3] == 0);
  CHECK(zero_ap[4] == 2);
  auto mult = power_sums(local_factor<Real>(LocalAp{11, 1, LocalKind::multiplicative}), 6);
  for (int k = 1; k <= 6; ++k) CHECK(abs(mult[k] - pow(Real(11), Real(-k) / 2)) < Real("1e-45"));
  // Good factor: |s_k| <= 2 since |alpha| = |beta| = 1.
  auto good = power_sums(local_factor<Real>(LocalAp{101, 17, LocalKind::good}), 30);
  for (int k = 1; k <= 30; ++k) CHECK(abs(good[k]) <= 2 + Real("1e-40"));
}

TEST_CASE("arithmetic_term") {
  std::vector<LocalAp> none;
  for (uint64_t p : primes_below(1000)) none.push_back({p, 0, LocalKind::additive});
  CHECK(arithmetic_term(none, Real(1)) == 0);

  const uint64_t cutoff = prime_cutoff(Real(1));
  CHECK(cutoff == 535);
  auto table = local_ap_table(k11, cutoff, nullptr, 1000000);
  Real g = arithmetic_term(table, Real(1));
  RealWide want = oracle::arithmetic_exact(table, 1.0);
  CHECK(abs(RealWide(g) - want) < RealWide("1e-6"));
  CHECK(abs(RealWide(g) - want) < RealWide("1e-30"));

  // Primes past the cutoff contribute nothing.
  auto longer = local_ap_table(k11, 2000, nullptr, 1000000);
  CHECK(arithmetic_term(longer, Real(1)) == g);

  // Doubled working precision moves the value by less than 1e-8.
  auto t15 = local_ap_table(k37, prime_cutoff(Real(1.5)), nullptr, 1000000);
  Real g50 = arithmetic_term(t15, Real(1.5));
  RealWide g100 = arithmetic_term(t15, RealWide(1.5));
  CHECK(abs(RealWide(g50) - g100) < RealWide("1e-8"));
  CHECK(abs(RealWide(g50) - oracle::arithmetic_exact(t15, 1.5)) < RealWide("1e-6"));
}

TEST_CASE("archimedean_term matches quadrature of the integral form") {
  for (double d : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    long double q = oracle::archimedean_quadrature(d);
    Real c = archimedean_term(Real(d));
    INFO("Delta=" << d << " closed=" << c << " quad=" << static_cast<double>(q));
    CHECK(std::abs(c.convert_to<long double>() - q) < 1e-8L);
  }
  CHECK(abs(archimedean_term(Real(1e6))) < Real("1e-6"));
}

TEST_CASE("conductor_term") {
  const long double pi = boost::math::constants::pi<long double>();
  auto direct = [&](long double n, long double d) { return std::log(std::sqrt(n) / (2 * pi)) / (d * pi); };
  CHECK(std::abs(conductor_term(BigInt(11), Real(1)).convert_to<long double>() - direct(11, 1)) < 1e-10L);
  CHECK(std::abs(conductor_term(BigInt(37), Real(1)).convert_to<long double>() - direct(37, 1)) < 1e-10L);
  CHECK(std::abs(conductor_term(BigInt(11), Real(1)).convert_to<double>() - (-0.20341)) < 1e-3);
  CHECK(std::abs(conductor_term(BigInt(37), Real(1)).convert_to<double>() - (-0.0103190)) < 1e-6);
  // N = 4 pi^2 is not an integer; the term vanishes exactly at sqrt(N) = 2 pi.
  CHECK(std::abs(direct(4 * pi * pi, 2.5)) < 1e-15L);
  CHECK_THROWS_AS(conductor_term(BigInt(0), Real(1)), Error);
}

TEST_CASE("parity refinement") {
  CHECK(parity_refine(Real("29.7"), 1) == 28);
  CHECK(parity_refine(Real("28.6"), -1) == 27);
  CHECK(parity_refine(Real(5), -1) == 5);
  CHECK_FALSE(parity_refine(Real(5), std::nullopt).has_value());
}

TEST_CASE("bounds for small conductors at Delta = 1.5") {
  struct Case {
    EllipticCurve e;
    long n, rank;
    int eps;
  };
  for (auto& c : {Case{k11, 11, 0, 1}, Case{k37, 37, 1, -1}, Case{k389, 389, 2, 1}}) {
    AnalyticBoundParams prm;
    prm.delta = Real(1.5);
    prm.conductor = c.n;
    prm.root_number = c.eps;
    auto b = analytic_rank_bound(c.e, prm);
    INFO("N=" << c.n << " raw=" << b.raw);
    CHECK(b.raw >= c.rank);
    REQUIRE(b.parity_refined.has_value());
    CHECK(*b.parity_refined >= c.rank);
    CHECK((*b.parity_refined - c.rank) % 2 == 0);
  }
}

TEST_CASE("a_p cache round trip and budget guard") {
  ApCache c{{2, -2}, {3, -1}, {5, 1}};
  std::stringstream ss;
  write_ap_cache(ss, c);
  CHECK(read_ap_cache(ss) == c);
  std::stringstream bad("5 1\n3 -1\n");
  CHECK_THROWS_AS(read_ap_cache(bad), Error);
  AnalyticBoundParams prm;
  prm.delta = Real(3);
  prm.conductor = 11;
  prm.count_budget = 1000;
  CHECK_THROWS_AS(analytic_rank_bound(k11, prm), Error);
}
