// Line sieve over [-A,A] x [b_lo,b_hi] for ideals (a + b alpha) that factor
// over the factor base, plus rational relations p + 0 alpha and targeted lines b = p.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ecrank/cubic_field.hpp"

namespace ecrank {

enum class RelationSource { sieved, rational, targeted };
std::string to_string(RelationSource s);

struct Relation {
  BigInt a, b;
  // (factor-base column, valuation of the fractional ideal (a + b alpha)),
  // columns ascending, zero valuations omitted.
  std::vector<std::pair<uint32_t, int>> exps;
  RelationSource source = RelationSource::sieved;
  friend bool operator==(const Relation& x, const Relation& y) {
    return x.a == y.a && x.b == y.b && x.exps == y.exps;
  }
};

struct SieveParams {
  int64_t A = 0;
  int64_t b_lo = 1, b_hi = 1;
  double threshold_bits = 20;        // slack below log2 |F(a,-b)|
  std::size_t segment = 1u << 26;    // entries per a-interval
  std::size_t memory_budget = 1u << 30;  // bytes per worker
  uint64_t power_cutoff = 1000;      // sieve p^k, k >= 2, for p below this
  unsigned threads = 0;              // 0 = available parallelism
};

// Coprime (a,b) whose accumulated log2 p reaches log2 |F(a,-b)| - threshold,
// sorted by (b,a).
std::vector<std::pair<int64_t, int64_t>> line_sieve(const FactorBase& fb, const SieveParams& prm);

// The relation when F(a,-b) factors completely over primes below the bound.
// Exponent at the prime with root (r:s) over p is v_p(F(a,-b)) when (a:-b) = (r:s)
// mod p, minus v_p(c3) at (1:0).
std::optional<Relation> trial_factor(const FactorBase& fb, const BigInt& a, const BigInt& b);

// line_sieve followed by trial_factor.
std::vector<Relation> sieve_relations(const FactorBase& fb, const SieveParams& prm);

// (p) for every p < limit all of whose primes have degree one.
std::vector<Relation> rational_relations(const FactorBase& fb, uint64_t limit);

// Relations a + p alpha on the line b = p, |a| doubling from start_A up to
// max_A until `count` are found.
std::vector<Relation> targeted_relations(const FactorBase& fb, uint64_t p, std::size_t count, int64_t start_A = 1024,
                                         int64_t max_A = int64_t(1) << 32);

// sum e log p == log|F(a,-b)| - log|c3|, checked as p-adic identities.
bool norm_identity_holds(const FactorBase& fb, const Relation& r);

// Sort by (b,a) and drop repeated pairs, keeping the first.
void dedupe(std::vector<Relation>& rels);

}  // namespace ecrank
