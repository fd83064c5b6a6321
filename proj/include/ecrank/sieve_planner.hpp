// Sieve parameters: skewness, Murphy alpha and shell-based yield estimates.
#pragma once

#include "ecrank/numeric.hpp"

namespace ecrank {

// log2 of the skewness s = A/B: the t minimizing max_i (log2|c_i| + (2i-3)t/2),
// i.e. where the two largest of |c_i| A^i B^{3-i} meet at unit area.
Real choose_skew_log2(const Cubic& f);
inline Real choose_skew(const Cubic& f) { return pow(Real(2), choose_skew_log2(f)); }

// Murphy alpha in natural-log units, summed over p <= prime_cutoff:
// log p (1/(p-1) - E[v_p(F(a,b))]) over coprime (a,b).
Real murphy_alpha(const Cubic& f, uint64_t prime_cutoff);
inline Real nats_to_bits(const Real& x) { return x / log(Real(2)); }

// Expected p-adic valuation of F(a,b) over coprime pairs.
Real expected_valuation(const Cubic& f, uint64_t p);

// Sieve rectangle [-A,A] x [1,B] with 2AB = 2^region_bits and A/B = 2^log2_skew.
std::pair<BigInt, BigInt> region_sides(const Real& log2_skew, const Real& region_bits);

// log2 of max |F| on the boundary of the region above.
Real max_norm_bits(const Cubic& f, const Real& log2_skew, const Real& region_bits);

// log2 of sum_i |c_i| A^i B^{3-i}: each term at its own maximum (A,B). This is
// the boundary-size estimate the yield model uses; it sits about one bit above
// max_norm_bits when two terms dominate.
Real term_sum_bits(const Cubic& f, const Real& log2_skew, const Real& region_bits);

struct SievePlan {
  Real log2_skew = 0;
  Real region_bits = 0;  // S = log2(2AB)
  BigInt A = 1, B = 1;
  Real alpha = 0;  // nats
  BigInt smoothness_bound = 2;
  // Yield model: the inner region of 2^base_bits is valued at base_norm_bits
  // (log2 of the representative |F|, alpha included); each outer shell adds 3/2
  // of its width.
  Real base_bits = 0;
  Real base_norm_bits = 0;
  Real log2_bound = 1;
  Real predicted_relations = 0;
};

// Fixed constants of the K28 table: base 42.25, 174.6 bits, log2 B = 20.2.
SievePlan table1_exact_plan(const Real& region_bits);

// Everything recomputed from the form: skew, alpha at alpha_cutoff, term-sum norm.
SievePlan self_plan(const Cubic& f, const BigInt& bound, const Real& region_bits, const Real& base_bits,
                    uint64_t alpha_cutoff = 2000);

// (1/zeta(2)) sum_i beta(i) rho((base_norm_bits + 3/2 (i shell)) / log2 B); a
// partial last shell is included at its outer radius.
Real estimate_relations(const SievePlan& plan, const Real& shell = Real(0.25));

}  // namespace ecrank
