#include "ecrank/elliptic.hpp"

namespace ecrank {

CurveInvariants invariants(const EllipticCurve& e) {
  CurveInvariants v;
  v.b2 = e.a1 * e.a1 + 4 * e.a2;
  v.b4 = 2 * e.a4 + e.a1 * e.a3;
  v.b6 = e.a3 * e.a3 + 4 * e.a6;
  v.b8 = e.a1 * e.a1 * e.a6 + 4 * e.a2 * e.a6 - e.a1 * e.a3 * e.a4 + e.a2 * e.a3 * e.a3 - e.a4 * e.a4;
  v.c4 = v.b2 * v.b2 - 24 * v.b4;
  v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
  v.disc = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
  if (v.disc == 0) throw Error(ErrorKind::math, "singular curve: discriminant is zero");
  return v;
}

bool verify_point(const EllipticCurve& e, const Rational& x, const Rational& y) {
  Rational lhs = y * y + Rational(e.a1) * x * y + Rational(e.a3) * y;
  Rational rhs = x * x * x + Rational(e.a2) * x * x + Rational(e.a4) * x + Rational(e.a6);
  return lhs == rhs;
}

BigInt count_ap(const EllipticCurve& e, uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::math, "count_ap: modulus not prime");
  if (p > (uint64_t{1} << 32)) throw Error(ErrorKind::budget, "count_ap: p above the enumeration budget 2^32");
  const CurveInvariants v = invariants(e);
  if (mod_u64(v.disc, p) == 0)
    throw Error(ErrorKind::math, "count_ap: bad reduction at p=" + std::to_string(p) + "; use tate_local");
  if (p <= 3) {
    uint64_t a1 = mod_u64(e.a1, p), a2 = mod_u64(e.a2, p), a3 = mod_u64(e.a3, p), a4 = mod_u64(e.a4, p),
             a6 = mod_u64(e.a6, p);
    long n = 1;
    for (uint64_t x = 0; x < p; ++x)
      for (uint64_t y = 0; y < p; ++y)
        if ((y * y + a1 * x * y + a3 * y) % p == (x * x * x + a2 * x * x + a4 * x + a6) % p) ++n;
    return BigInt(static_cast<long>(p + 1) - n);
  }
  // #{y : y^2 = g(x)} = 1 + chi(g(x)) with g = 4x^3 + b2 x^2 + 2 b4 x + b6.
  const uint64_t c3 = 4, c2 = mod_u64(v.b2, p), c1 = mod_u64(2 * v.b4, p), c0 = mod_u64(v.b6, p);
  long sum = 0;
  if (p <= 20000000) {
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (uint64_t y = 1; y <= p / 2; ++y) chi[y * y % p] = 1;
    for (uint64_t x = 0; x < p; ++x) {
      uint64_t g = (((c3 * x + c2) % p * x + c1) % p * x + c0) % p;
      sum += chi[g];
    }
  } else {
    for (uint64_t x = 0; x < p; ++x) {
      uint64_t g = (mulmod((mulmod((c3 * x + c2) % p, x, p) + c1) % p, x, p) + c0) % p;
      if (g == 0) continue;
      sum += powmod(g, (p - 1) / 2, p) == 1 ? 1 : -1;
    }
  }
  return BigInt(-sum);
}

const char* to_string(Reduction r) {
  switch (r) {
    case Reduction::good: return "good";
    case Reduction::split_multiplicative: return "split_multiplicative";
    case Reduction::nonsplit_multiplicative: return "nonsplit_multiplicative";
    case Reduction::additive: return "additive";
  }
  return "?";
}

namespace {

BigInt pmod(const BigInt& x, const BigInt& p) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
  return r;
}

bool divides(const BigInt& d, const BigInt& x) { return mpz_divisible_p(x.get_mpz_t(), d.get_mpz_t()) != 0; }

BigInt inv(const BigInt& a, const BigInt& p) {
  BigInt r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t())) throw Error(ErrorKind::math, "tate: not invertible");
  return r;
}

// Number of roots of T^2 + b T + c mod p.
int quad_roots(const BigInt& b, const BigInt& c, const BigInt& p) {
  if (p == 2) {
    int n = 0;
    if (pmod(c, p) == 0) ++n;
    if (pmod(1 + b + c, p) == 0) ++n;
    return n;
  }
  BigInt d = pmod(b * b - 4 * c, p);
  if (d == 0) return 1;
  return mpz_legendre(d.get_mpz_t(), p.get_mpz_t()) == 1 ? 2 : 0;
}

int cubic_root_count(const BigInt& b, const BigInt& c, const BigInt& d, const BigInt& p) {
  Cubic f{1, b, c, d};
  return static_cast<int>(roots_mod_p(f, p).size());
}

struct Model {
  BigInt a1, a2, a3, a4, a6;
  void rst(const BigInt& r, const BigInt& s, const BigInt& t) {
    BigInt n1 = a1 + 2 * s;
    BigInt n2 = a2 - s * a1 + 3 * r - s * s;
    BigInt n3 = a3 + r * a1 + 2 * t;
    BigInt n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    BigInt n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    a1 = n1, a2 = n2, a3 = n3, a4 = n4, a6 = n6;
  }
};

}  // namespace

// Tate's algorithm in the form given by Cremona (Algorithms for Modular
// Elliptic Curves, 3.2), working on the supplied integral model.
LocalReductionData tate_local(const EllipticCurve& e, const BigInt& p) {
  if (!is_prime(p)) throw Error(ErrorKind::math, "tate_local: modulus not prime");
  LocalReductionData out;
  out.p = p;
  Model m{e.a1, e.a2, e.a3, e.a4, e.a6};
  const BigInt p2 = p * p, p3 = p2 * p, p4 = p3 * p, p6 = p3 * p3;
  for (;;) {
    CurveInvariants v = invariants(EllipticCurve{m.a1, m.a2, m.a3, m.a4, m.a6});
    const int n = valuation(v.disc, p);
    out.ord_p_disc = n;
    if (n == 0) {
      out.type = Reduction::good;
      out.kodaira = "I0";
      out.conductor_exponent = 0;
      if (mpz_sizeinbase(p.get_mpz_t(), 2) <= 32)
        out.a_p = count_ap(EllipticCurve{m.a1, m.a2, m.a3, m.a4, m.a6}, p.get_ui());
      return out;
    }
    BigInt r, t;
    if (p == 2) {
      if (divides(p, v.b2)) {
        r = pmod(m.a4, p);
        t = pmod(r * (1 + m.a2 + m.a4) + m.a6, p);
      } else {
        r = pmod(m.a3, p);
        t = pmod(r + m.a4, p);
      }
    } else if (p == 3) {
      r = divides(p, v.b2) ? pmod(-v.b6, p) : pmod(-v.b2 * v.b4, p);
      t = pmod(m.a1 * r + m.a3, p);
    } else {
      if (divides(p, v.c4))
        r = pmod(-inv(BigInt(12), p) * v.b2, p);
      else
        r = pmod(-inv(12 * v.c4, p) * (v.c6 + v.b2 * v.c4), p);
      t = pmod(-inv(BigInt(2), p) * (m.a1 * r + m.a3), p);
    }
    m.rst(r, 0, t);

    if (!divides(p, v.c4)) {
      const bool split = quad_roots(m.a1, -m.a2, p) > 0;
      out.type = split ? Reduction::split_multiplicative : Reduction::nonsplit_multiplicative;
      out.a_p = split ? 1 : -1;
      out.conductor_exponent = 1;
      out.kodaira = "I" + std::to_string(n);
      out.tamagawa = split ? n : (n % 2 == 0 ? 2 : 1);
      return out;
    }
    out.type = Reduction::additive;
    out.a_p = 0;
    if (!divides(p2, m.a6)) {
      out.kodaira = "II";
      out.conductor_exponent = n;
      out.tamagawa = 1;
      return out;
    }
    const BigInt b8 = invariants(EllipticCurve{m.a1, m.a2, m.a3, m.a4, m.a6}).b8;
    if (!divides(p3, b8)) {
      out.kodaira = "III";
      out.conductor_exponent = n - 1;
      out.tamagawa = 2;
      return out;
    }
    const BigInt b6 = invariants(EllipticCurve{m.a1, m.a2, m.a3, m.a4, m.a6}).b6;
    if (!divides(p3, b6)) {
      out.kodaira = "IV";
      out.conductor_exponent = n - 2;
      out.tamagawa = quad_roots(m.a3 / p, -m.a6 / p2, p) > 0 ? 3 : 1;
      return out;
    }
    BigInt s;
    if (p == 2) {
      s = pmod(m.a2, p);
      t = 2 * pmod(m.a6 / 4, p);
    } else {
      s = pmod(-m.a1 * inv(BigInt(2), p), p);
      t = pmod(-m.a3 * inv(BigInt(2), p2), p2);  // p^3 | a6 needs t mod p^2
    }
    m.rst(0, s, t);
    const BigInt b = m.a2 / p, c = m.a4 / p2, d = m.a6 / p3;
    const BigInt w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
    const BigInt x = 3 * c - b * b;
    if (!divides(p, w)) {
      out.kodaira = "I0*";
      out.conductor_exponent = n - 4;
      out.tamagawa = 1 + cubic_root_count(b, c, d, p);
      return out;
    }
    if (!divides(p, x)) {
      BigInt rr;
      if (p == 2)
        rr = c;
      else if (p == 3)
        rr = b * c;
      else
        rr = (b * c - 9 * d) * inv(2 * x, p);
      m.rst(p * pmod(rr, p), 0, 0);
      int ix = 3, iy = 3;
      BigInt mx = p2, my = p2;
      for (;;) {
        BigInt a2t = m.a2 / p, a3t = m.a3 / my, a4t = (m.a4 / p) / mx, a6t = (m.a6 / mx) / my;
        if (!divides(p, a3t * a3t + 4 * a6t)) {
          out.tamagawa = quad_roots(a3t, -a6t, p) > 0 ? 4 : 2;
          break;
        }
        BigInt tt = p == 2 ? my * a6t : my * pmod(-a3t * inv(BigInt(2), p), p);
        m.rst(0, 0, tt);
        my *= p;
        ++iy;
        a2t = m.a2 / p, a3t = m.a3 / my, a4t = (m.a4 / p) / mx, a6t = (m.a6 / mx) / my;
        if (!divides(p, a4t * a4t - 4 * a6t * a2t)) {
          // a2t T^2 + a4t T + a6t with p not dividing a2t
          BigInt ia = inv(a2t, p);
          out.tamagawa = quad_roots(a4t * ia, a6t * ia, p) > 0 ? 4 : 2;
          break;
        }
        BigInt rr2 = p == 2 ? mx * pmod(a6t * a2t, p) : mx * pmod(-a4t * inv(2 * a2t, p), p);
        m.rst(rr2, 0, 0);
        mx *= p;
        ++ix;
      }
      const int mm = ix + iy - 5;
      out.kodaira = "I" + std::to_string(mm) + "*";
      out.conductor_exponent = n - mm - 4;
      return out;
    }
    // Triple root.
    BigInt rp = p == 3 ? BigInt(-d) : BigInt(-b * inv(BigInt(3), p));
    m.rst(p * pmod(rp, p), 0, 0);
    const BigInt x3 = m.a3 / p2, x6 = m.a6 / p4;
    if (!divides(p, x3 * x3 + 4 * x6)) {
      out.kodaira = "IV*";
      out.conductor_exponent = n - 6;
      out.tamagawa = quad_roots(x3, -x6, p) > 0 ? 3 : 1;
      return out;
    }
    BigInt tt = p == 2 ? x6 : BigInt(x3 * inv(BigInt(2), p));
    tt = -p2 * pmod(tt, p);
    m.rst(0, 0, tt);
    if (!divides(p4, m.a4)) {
      out.kodaira = "III*";
      out.conductor_exponent = n - 7;
      out.tamagawa = 2;
      return out;
    }
    if (!divides(p6, m.a6)) {
      out.kodaira = "II*";
      out.conductor_exponent = n - 8;
      out.tamagawa = 1;
      return out;
    }
    // Non-minimal model: scale by p and start over.
    m.a1 /= p;
    m.a2 /= p2;
    m.a3 /= p3;
    m.a4 /= p4;
    m.a6 /= p6;
  }
}

Cubic two_division_cubic(const EllipticCurve& e) {
  const CurveInvariants v = invariants(e);
  Cubic f{4, v.b2, 2 * v.b4, v.b6};
  if (rational_root(f)) throw Error(ErrorKind::math, "two_division_cubic: curve has rational 2-torsion");
  return f;
}

PartialFactorization trial_factor_disc(const BigInt& n, uint64_t limit) {
  PartialFactorization out;
  BigInt rest = abs(n);
  for (uint64_t p : primes_below(limit)) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      BigInt bp(static_cast<unsigned long>(p));
      int k = static_cast<int>(mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), bp.get_mpz_t()));
      out.primes.emplace_back(bp, k);
    }
  }
  out.cofactor = rest;
  return out;
}

BigInt conductor(const EllipticCurve& e, const std::vector<BigInt>& bad_primes) {
  BigInt n = 1;
  for (const auto& p : bad_primes) {
    auto ld = tate_local(e, p);
    for (int i = 0; i < ld.conductor_exponent; ++i) n *= p;
  }
  return n;
}

}  // namespace ecrank
