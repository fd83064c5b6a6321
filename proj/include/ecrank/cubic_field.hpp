// Binary cubic forms as cubic fields: discriminant, Julia reduction, index
// removal, signature, degree-one primes and the factor base.
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ecrank/numeric.hpp"

namespace ecrank {

BigInt disc(const Cubic& f);

// Integer matrix [[p, q], [r, s]] acting by F -> F(pX + qY, rX + sY).
struct Transform {
  BigInt p = 1, q = 0, r = 0, s = 1;
};

Cubic substitute(const Cubic& f, const Transform& m);
Transform compose(const Transform& first, const Transform& second);

struct ReducedForm {
  Cubic form;
  Transform transform;  // form = substitute(input, transform)
};

// GL2(Z)-reduction of an irreducible form. The positive definite covariant is
// the Hessian when disc > 0 and Julia's covariant when disc < 0; the result is
// normalized to c3 > 0, c2 >= 0, ties broken toward the lexicographically
// smallest (|c3|, |c2|, |c1|, |c0|).
ReducedForm julia_reduce_tracked(const Cubic& f);
inline Cubic julia_reduce(const Cubic& f) { return julia_reduce_tracked(f).form; }

struct CubicField {
  Cubic form;
  BigInt disc;
  int r1 = 0, r2 = 0;
};

// Wraps a form already known to have field discriminant.
CubicField field_from_form(const Cubic& f);

// True when the cubic ring of f has index prime to q.
bool is_maximal_at(const Cubic& f, const BigInt& q);

// Removes the index at every listed prime and Julia-reduces. maximalize
// requires a complete factorization of disc(f); maximalize_at trusts the caller
// that no other prime squared divides the index.
CubicField maximalize(const Cubic& f, const std::vector<std::pair<BigInt, int>>& factored_disc);
CubicField maximalize_at(const Cubic& f, const std::vector<BigInt>& primes);

// floor(12 (ln |disc|)^2).
BigInt bach_bound(const CubicField& k);

struct FactorBasePrime {
  uint64_t p = 0;
  uint64_t r = 0, s = 1;  // root (r:s) of F mod p, s in {0,1}
  bool ramified = false;
  int alpha_valuation = 0;  // ord of the fractional ideal (alpha) at this prime
  friend bool operator==(const FactorBasePrime&, const FactorBasePrime&) = default;
};

// Sort key: affine roots ascending, then (1:0).
inline uint64_t root_key(uint64_t p, uint64_t r, uint64_t s) { return s == 0 ? p : r; }

struct FactorBase {
  CubicField field;
  BigInt bound;
  std::vector<FactorBasePrime> primes;
  std::vector<std::size_t> infinite_columns;  // primes at (1:0), i.e. over p | c3

  // Column of the prime over p with root (r:s), if present.
  std::optional<std::size_t> column(uint64_t p, uint64_t r, uint64_t s) const;
  // Columns of primes over p, in order.
  std::pair<std::size_t, std::size_t> range(uint64_t p) const;
};

// Fills infinite_columns from primes.
void index_factor_base(FactorBase& fb);

// One entry per degree-one prime of norm < bound. Work is split over prime
// ranges across `threads` workers; output does not depend on the count.
FactorBase build_factor_base(const CubicField& k, const BigInt& bound, unsigned threads = 0);

}  // namespace ecrank
