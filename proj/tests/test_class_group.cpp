#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecrank/class_group.hpp"
#include "oracles/class_group.hpp"

using namespace ecrank;

namespace {

struct FieldCase {
  Cubic form;
  long disc;
};

// Maximal reduced forms. 2-ranks and orders come from the enumeration oracle.
const std::vector<FieldCase> kFields{
    {{1, 1, 0, -1}, -23},      {{1, 0, 4, 1}, -283},       {{1, 0, -4, 1}, 229},      {{1, 2, -8, 1}, 1957},
    {{1, 3, 14, -22}, -36536}, {{1, 4, -8, 25}, -34603},   {{2, 4, -2, 21}, -58924},  {{2, 3, 14, -13}, -56692},
};

oracle::ClassGroupOracle oracle_for(const CubicField& k) {
  auto a = oracle::oracle_class_group(k.form, k.r2, k.disc, 8);
  auto b = oracle::oracle_class_group(k.form, k.r2, k.disc, 12);
  REQUIRE(a.order > 0);
  REQUIRE(a.order == b.order);  // the box is large enough
  REQUIRE(a.two_rank == b.two_rank);
  return a;
}

std::size_t dense_rank(std::vector<std::vector<int>> a) {
  std::size_t r = 0;
  const std::size_t n = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < n && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && !a[p][c]) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != r && a[i][c])
        for (std::size_t j = 0; j < n; ++j) a[i][j] ^= a[r][j];
    ++r;
  }
  return r;
}

}  // namespace

TEST_CASE("oracle class numbers") {
  auto k23 = field_from_form(Cubic{1, 1, 0, -1});
  CHECK(oracle_for(k23).order == 1);
  CHECK(oracle_for(k23).two_rank == 0);
  auto k283 = field_from_form(Cubic{1, 0, 4, 1});
  CHECK(oracle_for(k283).order == 2);
  CHECK(oracle_for(k283).two_rank == 1);
  // C4: 2-rank one although 4 divides h.
  auto k = field_from_form(Cubic{1, 3, 14, -22});
  CHECK(oracle_for(k).order == 4);
  CHECK(oracle_for(k).two_rank == 1);
}

TEST_CASE("pipeline bounds meet the oracle 2-rank") {
  int nonzero = 0;
  for (auto& fc : kFields) {
    auto k = field_from_form(fc.form);
    REQUIRE(k.disc == fc.disc);
    const int want = oracle_for(k).two_rank;
    PipelineParams prm;
    auto rep = class_group_report(k, prm);
    INFO("disc " << fc.disc);
    CHECK(rep.upper.two_rank == static_cast<std::size_t>(want));
    CHECK(rep.lower.two_rank == static_cast<std::size_t>(want));
    CHECK(rep.status() == "exact (GRH)");
    CHECK(rep.upper.grh_conditional);
    CHECK(rep.lower.selmer_rank == static_cast<std::size_t>(want + k.r1 + k.r2));
    if (want > 0) ++nonzero;
  }
  CHECK(nonzero >= 4);
}

TEST_CASE("certificate, character multiplicativity and left-null recheck") {
  auto k = field_from_form(Cubic{1, 4, -8, 25});  // 2-rank two
  auto fb = build_factor_base(k, bach_bound(k) + 1);
  auto rels = rational_relations(fb, fb.bound.get_ui());
  SieveParams sp;
  sp.A = 4096;
  sp.b_hi = 64;
  auto more = sieve_relations(fb, sp);
  rels.insert(rels.end(), more.begin(), more.end());

  auto lb = selmer_lower_bound(fb, rels);
  CHECK(lb.two_rank == 2);
  CHECK(verify_certificate(fb, rels, lb.certificate, lb.selmer_rank));
  CHECK_FALSE(verify_certificate(fb, rels, lb.certificate, lb.selmer_rank + 1));
  // A flipped character bit is caught.
  auto bad = lb.certificate;
  bad.characters[0].flip(0);
  CHECK_FALSE(verify_certificate(fb, rels, bad, lb.selmer_rank));

  // Dense recheck of the character matrix rank.
  std::vector<std::vector<int>> mat;
  for (auto& c : lb.certificate.characters) {
    std::vector<int> row(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) row[j] = c.get(j);
    mat.push_back(row);
  }
  CHECK(dense_rank(mat) == lb.selmer_rank);

  // chi(b_i b_j) = chi(b_i) xor chi(b_j), with the product evaluated directly.
  auto m = relation_matrix(fb, rels);
  auto& cert = lb.certificate;
  for (std::size_t i = 0; i + 1 < cert.candidates.size(); ++i) {
    BitVector sel(rels.size());
    for (auto r : cert.candidates[i]) sel.flip(r);
    for (auto r : cert.candidates[i + 1]) sel.flip(r);
    CHECK_FALSE(m.left_multiply(sel).any());
    for (std::size_t j = 0; j < cert.primes.size(); ++j) {
      const uint64_t q = cert.primes[j].q;
      uint64_t prod = 1;
      for (auto r : sel.ones()) {
        const uint64_t v = (mod_u64(rels[r].a, q) + mulmod(mod_u64(rels[r].b, q), cert.primes[j].r, q)) % q;
        prod = mulmod(prod, v, q);
      }
      CHECK(legendre_additive(prod, q) == (cert.characters[i].get(j) != cert.characters[i + 1].get(j)));
    }
  }
  for (auto& ap : cert.primes) {
    CHECK(BigInt(static_cast<unsigned long>(ap.q)) >= fb.bound);
    CHECK(eval_form(k.form, BigInt(static_cast<unsigned long>(ap.r)), 1) % static_cast<unsigned long>(ap.q) == 0);
  }

  // Fewer rows give fewer candidates and never a larger certified rank.
  auto part = selmer_lower_bound(fb, rels, 0, 40);
  CHECK(part.selmer_rank <= lb.selmer_rank);
}

TEST_CASE("primes above the protected bound are pruned without changing the answer") {
  auto k = field_from_form(Cubic{1, 0, 4, 1});
  PipelineParams prm;
  prm.smoothness_bound = 3 * bach_bound(k);
  auto rep = class_group_report(k, prm);
  CHECK(rep.upper.two_rank == 1);
  CHECK(rep.lower.two_rank == 1);
}

TEST_CASE("edge cases") {
  auto k = field_from_form(Cubic{1, 1, 0, -1});
  auto fb = build_factor_base(k, 118);
  CHECK_THROWS_AS(upper_bound_2rank(fb, {}, 117), Error);
  // One relation leaves most protected columns empty.
  auto rr = rational_relations(fb, 118);
  REQUIRE(!rr.empty());
  std::vector<Relation> one{rr.front()};
  CHECK_THROWS_AS(upper_bound_2rank(fb, one, 117), Error);
  CHECK(!empty_protected_columns(fb, one, 117).empty());

  // No candidates: lower bound 0.
  auto lb = selmer_lower_bound(fb, one);
  CHECK(lb.candidates == 0);
  CHECK(lb.two_rank == 0);

  ClassGroupReport r;
  r.upper.two_rank = 2;
  r.lower.two_rank = 1;
  CHECK(r.status() == "range");
  r.lower.two_rank = 2;
  CHECK(r.status() == "exact (GRH)");

  PipelineParams tight;
  tight.max_b = 2;
  tight.b_hi = 1;
  tight.A = 8;
  CHECK_THROWS_AS(class_group_report(field_from_form(Cubic{2, 4, -2, 21}), tight), Error);
}
