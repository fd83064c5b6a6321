// Integral Weierstrass curves: invariants, point membership, a_p by counting,
// local reduction data by Tate's algorithm, and the 2-division cubic.
#pragma once

#include <string>
#include <vector>

#include "ecrank/numeric.hpp"

namespace ecrank {

struct EllipticCurve {
  BigInt a1, a2, a3, a4, a6;
};

struct CurveInvariants {
  BigInt b2, b4, b6, b8, c4, c6, disc;
};

// Throws Error(math) for a singular curve.
CurveInvariants invariants(const EllipticCurve& e);

bool verify_point(const EllipticCurve& e, const Rational& x, const Rational& y);

// a_p = p + 1 - #E(F_p) for a prime of good reduction, p <= 2^32.
BigInt count_ap(const EllipticCurve& e, uint64_t p);

enum class Reduction { good, split_multiplicative, nonsplit_multiplicative, additive };
const char* to_string(Reduction r);

struct LocalReductionData {
  BigInt p;
  Reduction type = Reduction::good;
  BigInt a_p;  // counted for good p when p <= 2^32, +-1 multiplicative, 0 additive
  int ord_p_disc = 0;
  int conductor_exponent = 0;
  std::string kodaira;
  int tamagawa = 1;
};

LocalReductionData tate_local(const EllipticCurve& e, const BigInt& p);

// 4x^3 + b2 x^2 + 2 b4 x + b6 as a binary form; throws when it has a rational
// root (rational 2-torsion).
Cubic two_division_cubic(const EllipticCurve& e);

// Primes p < limit dividing the discriminant, with the unfactored cofactor of |disc|.
struct PartialFactorization {
  std::vector<std::pair<BigInt, int>> primes;
  BigInt cofactor;
};
PartialFactorization trial_factor_disc(const BigInt& n, uint64_t limit);

// Conductor from the complete list of bad primes.
BigInt conductor(const EllipticCurve& e, const std::vector<BigInt>& bad_primes);

}  // namespace ecrank
