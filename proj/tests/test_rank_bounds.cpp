#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecrank/rank_bounds.hpp"
#include "record_data.hpp"

using namespace ecrank;

namespace {

EllipticCurve curve_of(int r) {
  auto& a = fixtures::curve(r).a;
  return {BigInt(a[0]), BigInt(a[1]), BigInt(a[2]), BigInt(a[3]), BigInt(a[4])};
}

CubicField field_of(int r) {
  auto& c = fixtures::form(r).c;
  return field_from_form(Cubic{BigInt(c[0]), BigInt(c[1]), BigInt(c[2]), BigInt(c[3])});
}

// Local data at every prime below 10^6 dividing the discriminant; the
// remaining cofactor is returned as the residual.
std::pair<std::vector<LocalReductionData>, BigInt> local_data(const EllipticCurve& e) {
  auto pf = trial_factor_disc(invariants(e).disc, 1000000);
  std::vector<LocalReductionData> out;
  for (auto& [p, k] : pf.primes) out.push_back(tate_local(e, p));
  return {out, pf.cofactor};
}

}  // namespace

TEST_CASE("published Selmer table rows") {
  for (auto& row : fixtures::kSelmerTable) {
    BKTerms t;
    t.g = row.g;
    t.u = row.u;
    t.n = row.n;
    t.root_number = row.eps;
    CHECK(selmer_upper_bound(t) == row.sel);
    std::string want = std::to_string(row.r) + " " + std::to_string(row.g) + " " + std::to_string(row.u) + " " +
                       std::to_string(row.n) + " " + (row.eps > 0 ? "+1" : "-1") + " " + std::to_string(row.sel);
    CHECK(table_row(row.r, t) == want);
  }
}

TEST_CASE("parity moves the bound by zero or one") {
  for (int g = 0; g < 6; ++g)
    for (int u = 1; u <= 2; ++u)
      for (int n = 0; n < 5; ++n)
        for (int eps : {1, -1}) {
          BKTerms t;
          t.g = g;
          t.u = u;
          t.n = n;
          const int raw = selmer_upper_bound(t);
          t.root_number = eps;
          const int s = selmer_upper_bound(t);
          CHECK(raw == g + u + n);
          CHECK((raw - s == 0 || raw - s == 1));
          CHECK(((s % 2 == 0) == (eps == 1)));
        }
  BKTerms t;
  t.g = 0;
  t.u = 1;
  t.n = 0;
  CHECK(selmer_upper_bound(t) == 1);
  t.root_number = 3;
  CHECK_THROWS_AS(selmer_upper_bound(t), Error);
}

TEST_CASE("E28 conductor term from local data") {
  auto e = curve_of(28);
  auto [local, residual] = local_data(e);
  auto t = compute_bk_terms(e, local, field_of(28), 20, residual);
  CHECK(t.u == 2);
  CHECK(t.phi_m == std::vector<BigInt>{5, 7, 11, 13});
  REQUIRE(t.phi_a.size() == 1);
  CHECK(t.phi_a[0].first == 3);
  CHECK(t.phi_a[0].second == 3);  // 3 splits completely in K28
  CHECK(t.n == 6);
  t.root_number = 1;
  CHECK(selmer_upper_bound(t) == 28);

  // Dropping the data at 7 is reported by name.
  std::vector<LocalReductionData> partial;
  for (auto& ld : local)
    if (ld.p != 7) partial.push_back(ld);
  try {
    compute_bk_terms(e, partial, field_of(28), 20, residual);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::data);
    CHECK(std::string(err.what()).find("p = 7") != std::string::npos);
  }
  CHECK_THROWS_AS(compute_bk_terms(e, local, field_of(28), 20, residual * 2), Error);
}

TEST_CASE("E23 terms") {
  auto e = curve_of(23);
  auto [local, residual] = local_data(e);
  auto t = compute_bk_terms(e, local, field_of(23), 15, residual);
  CHECK(t.u == 1);
  CHECK(t.n == 8);
}

TEST_CASE("small curve with negative discriminant") {
  EllipticCurve e{0, -1, 1, 0, 0};  // conductor 11, disc -11
  auto k = field_from_form(two_division_cubic(e));
  auto t = compute_bk_terms(e, {tate_local(e, 11)}, k, 0);
  CHECK(t.u == 1);
  CHECK(t.n == 0);
  CHECK(t.phi_m.empty());
  CHECK_THROWS_AS(compute_bk_terms(e, {}, k, 0), Error);
}

TEST_CASE("primes_above") {
  auto k = field_from_form(Cubic{1, 0, -1, -1});  // disc -23
  CHECK(primes_above(k, 59) == 3);
  CHECK(primes_above(k, 23) == 2);  // P^2 Q
  CHECK(primes_above(k, 2) == 1);   // x^3 + x + 1 is irreducible mod 2
  CHECK(primes_above(k, 5) == 2);
}

TEST_CASE("rank report") {
  BKTerms t;
  t.g = 20;
  t.u = 2;
  t.n = 6;
  t.root_number = 1;
  auto open = rank_report(t);
  CHECK(open.selmer_bound == 28);
  CHECK_FALSE(open.determined);
  CHECK_FALSE(open.g_lower.has_value());
  t.known_rank_lower = 28;
  auto r = rank_report(t);
  CHECK(r.determined);
  CHECK(*r.g_lower == 20);
  CHECK(*r.g_lower <= t.g);
  CHECK(r.text.find("rank determined (GRH)") != std::string::npos);

  t.g = 22;
  t.u = 1;
  t.n = 5;
  t.root_number = -1;
  t.known_rank_lower = 27;
  auto r27 = rank_report(t);
  CHECK(r27.raw_bound == 28);
  CHECK(r27.selmer_bound == 27);
  CHECK(r27.determined);

  t.known_rank_lower = 29;
  CHECK_THROWS_AS(rank_report(t), Error);
}
