// Bounds on dim Cl(K)[2] from a relation set: the GRH upper bound is the
// right nullity of the pruned relation matrix; the unconditional lower bound
// counts left nullvectors whose quadratic characters at auxiliary primes are
// independent, minus r1 + r2.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ecrank/cubic_field.hpp"
#include "ecrank/gf2.hpp"
#include "ecrank/relation_sieve.hpp"

namespace ecrank {

// Rows are relations, columns factor-base primes, entries exponents mod 2.
SparseBitMatrix relation_matrix(const FactorBase& fb, const std::vector<Relation>& rels);

struct UpperBound {
  std::size_t two_rank = 0;
  std::size_t columns = 0, rows = 0;        // after pruning
  std::size_t removed_columns = 0, removed_rows = 0;
  bool grh_conditional = true;
};

// Throws a math error when a column at norm <= protected_bound has no odd
// entry after pruning, since the bound would then count an unconstrained
// generator.
UpperBound upper_bound_2rank(const FactorBase& fb, const std::vector<Relation>& rels, const BigInt& protected_bound);

// Columns at norm <= protected_bound with no odd entry.
std::vector<std::size_t> empty_protected_columns(const FactorBase& fb, const std::vector<Relation>& rels,
                                                 const BigInt& protected_bound);

struct AuxPrime {
  uint64_t q = 0, r = 0;  // alpha maps to r mod q
};

struct SelmerCertificate {
  std::vector<AuxPrime> primes;
  // One row per certified candidate: its relation exponents mod 2 (indices
  // into the relation list) and its character bits, one per auxiliary prime.
  std::vector<std::vector<std::size_t>> candidates;
  std::vector<BitVector> characters;
};

struct LowerBound {
  std::size_t candidates = 0;   // left nullity of the relation matrix
  std::size_t selmer_rank = 0;  // rank of the character matrix
  std::size_t two_rank = 0;     // selmer_rank - (r1 + r2), floored at 0
  std::size_t skipped = 0;      // (relation, prime) pairs with a zero residue
  SelmerCertificate certificate;
};

// Auxiliary primes: the smallest degree-one primes q >= fb.bound not dividing
// c3 or the discriminant, one per affine root, `aux_primes` of them.
std::vector<AuxPrime> auxiliary_primes(const FactorBase& fb, std::size_t count);

// Quadratic character bits (a_i + b_i r mod q) for every relation and prime;
// entry [i] has one bit per prime. Zero residues count in `skipped` and leave
// the bit clear.
std::vector<BitVector> relation_characters(const std::vector<Relation>& rels, const std::vector<AuxPrime>& primes,
                                           std::size_t& skipped, unsigned threads = 0);

// row_limit > 0 uses only the first row_limit relations. aux_primes = 0 means
// four per element that could be certified, min(candidates, columns + r1 + r2),
// and at least 16.
LowerBound selmer_lower_bound(const FactorBase& fb, const std::vector<Relation>& rels, std::size_t aux_primes = 0,
                              std::size_t row_limit = 0, unsigned threads = 0);

// Recomputes every character bit of a certificate from the relations and
// checks the rank. Used by tests and by third-party verification.
bool verify_certificate(const FactorBase& fb, const std::vector<Relation>& rels, const SelmerCertificate& cert,
                        std::size_t claimed_rank);

struct ClassGroupReport {
  CubicField field;
  BigInt protected_bound, smoothness_bound;
  std::size_t factor_base_size = 0, relations = 0;
  UpperBound upper;
  LowerBound lower;
  std::string status() const;  // "exact (GRH)" or "range"
};

struct PipelineParams {
  BigInt protected_bound = 0;    // 0: Bach bound
  BigInt smoothness_bound = 0;   // 0: the protected bound
  int64_t A = 0;                 // 0: 4096
  int64_t b_hi = 0;              // first sieve height; 0: 32, doubled as needed
  int64_t max_b = 1 << 14;       // budget on the sieve height
  std::size_t excess = 32;       // rows beyond columns before stopping
  std::size_t aux_primes = 0;
  unsigned threads = 0;
};

// Factor base, rational and sieved relations (growing b until every protected
// column is hit and the excess is reached), then both bounds.
ClassGroupReport class_group_report(const CubicField& k, const PipelineParams& prm);

// Plain text followed by a key=value block.
std::string format_report(const ClassGroupReport& r);

}  // namespace ecrank
