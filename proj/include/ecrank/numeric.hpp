// Arbitrary-precision integers, high-precision reals, primes, roots of binary
// cubic forms modulo p, quadratic characters, dilogarithm and Dickman rho.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ecrank {

using BigInt = mpz_class;
using Rational = mpq_class;
using Real = boost::multiprecision::cpp_bin_float_50;
using RealWide = boost::multiprecision::cpp_bin_float_100;

// The numeric value doubles as the CLI exit status for the first three kinds.
enum class ErrorKind { usage = 1, data = 2, budget = 3, math = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Coefficients (c3, c2, c1, c0) of F(X,Y) = c3 X^3 + c2 X^2 Y + c1 X Y^2 + c0 Y^3.
using Cubic = std::array<BigInt, 4>;

// Projective point (r:s) over F_p with s in {0,1}; mult is the root multiplicity.
struct ProjRoot {
  uint64_t r = 0;
  uint64_t s = 1;
  int mult = 1;
  bool at_infinity() const { return s == 0; }
  friend bool operator==(const ProjRoot&, const ProjRoot&) = default;
};

bool is_prime(const BigInt& n);
bool is_prime(uint64_t n);

// All primes p with lo <= p < hi, ascending.
std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi);
inline std::vector<uint64_t> primes_below(uint64_t hi) { return primes_in(2, hi); }

uint64_t mod_u64(const BigInt& x, uint64_t p);
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t m);
// Square root of a quadratic residue modulo an odd prime.
uint64_t sqrtmod(uint64_t a, uint64_t p);

// Exponent of p in x (x != 0).
int valuation(const BigInt& x, const BigInt& p);
int valuation(const BigInt& x, uint64_t p);

BigInt eval_form(const Cubic& f, const BigInt& x, const BigInt& y);

// Projective roots of F modulo p with multiplicity; affine roots ascending,
// then (1:0) if p | c3. Throws if F vanishes identically mod p.
std::vector<ProjRoot> roots_mod_p(const Cubic& f, uint64_t p);
std::vector<ProjRoot> roots_mod_p(const Cubic& f, const BigInt& p);

// 0 when x is a square mod the odd prime p, 1 otherwise.
int legendre_additive(const BigInt& x, const BigInt& p);
int legendre_additive(uint64_t x, uint64_t p);

template <class R>
R pi() {
  return boost::math::constants::pi<R>();
}

template <class R>
R euler_gamma() {
  return boost::math::constants::euler<R>();
}

// Li_2(x) = sum x^n / n^2 on [0,1].
template <class R>
R dilog(const R& x) {
  if (x < 0 || x > 1) throw Error(ErrorKind::math, "dilog: argument outside [0,1]");
  const R zeta2 = pi<R>() * pi<R>() / 6;
  if (x == 0) return R(0);
  if (x == 1) return zeta2;
  if (x > R(0.5)) {
    using std::log;
    using boost::multiprecision::log;
    return zeta2 - log(x) * log(R(1) - x) - dilog(R(1) - x);
  }
  const R eps = std::numeric_limits<R>::epsilon() / 4;
  R sum = 0, xn = x;
  for (long n = 1; xn > eps * sum || n < 2; ++n) {
    sum += xn / (R(n) * n);
    xn *= x;
  }
  return sum;
}

Real dickman_rho(const Real& u);

template <class R>
R to_real(const BigInt& x) {
  return R(x.get_str());
}

// Roots of F(x,1) for a form with c3 != 0: the real roots ascending, and the
// complex pair re +- i*im when there is only one real root.
struct CubicRoots {
  std::vector<RealWide> real;
  RealWide re = 0, im = 0;
};
CubicRoots cubic_roots(const Cubic& f);

// A root (x:y) of F over Q, if any; (1:0) is returned as x = 1, y = 0.
// Throws when neither a local obstruction nor an exact root is found.
std::optional<std::pair<BigInt, BigInt>> rational_root(const Cubic& f);

}  // namespace ecrank
