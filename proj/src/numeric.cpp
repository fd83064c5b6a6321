#include "ecrank/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>

#include <boost/multiprecision/cpp_int.hpp>

namespace ecrank {

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 64) != 0;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<uint64_t> primes_in(uint64_t lo, uint64_t hi) {
  std::vector<uint64_t> out;
  if (hi <= 2 || hi <= lo) return out;
  uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(hi))) + 2;
  std::vector<char> small(root + 1, 1);
  std::vector<uint64_t> base;
  for (uint64_t i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (uint64_t j = i * i; j <= root; j += i) small[j] = 0;
  }
  lo = std::max<uint64_t>(lo, 2);
  const uint64_t seg = 1 << 20;
  std::vector<char> mark;
  for (uint64_t start = lo; start < hi; start += seg) {
    uint64_t end = std::min(hi, start + seg);
    mark.assign(end - start, 1);
    for (uint64_t q : base) {
      if (q * q >= end) break;
      uint64_t first = std::max(q * q, (start + q - 1) / q * q);
      for (uint64_t j = first; j < end; j += q) mark[j - start] = 0;
    }
    for (uint64_t i = start; i < end; ++i)
      if (mark[i - start]) out.push_back(i);
  }
  return out;
}

static_assert(sizeof(unsigned long) == sizeof(uint64_t), "LP64 platform expected");

uint64_t mod_u64(const BigInt& x, uint64_t p) { return mpz_fdiv_ui(x.get_mpz_t(), p); }

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

uint64_t invmod(uint64_t a, uint64_t m) {
  __int128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt, nt = tmp;
    tmp = r - q * nr;
    r = nr, nr = tmp;
  }
  if (r != 1) throw Error(ErrorKind::math, "invmod: not invertible");
  if (t < 0) t += m;
  return static_cast<uint64_t>(t);
}

uint64_t sqrtmod(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0 || p == 2) return a;
  if (powmod(a, (p - 1) / 2, p) != 1) throw Error(ErrorKind::math, "sqrtmod: non-residue");
  // Tonelli-Shanks
  uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) q >>= 1, ++s;
  uint64_t z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  uint64_t c = powmod(z, q, p), x = powmod(a, (q + 1) / 2, p), t = powmod(a, q, p);
  int m = s;
  while (t != 1) {
    int i = 0;
    uint64_t tt = t;
    while (tt != 1) tt = mulmod(tt, tt, p), ++i;
    uint64_t b = c;
    for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
    x = mulmod(x, b, p);
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    m = i;
  }
  return x;
}

int valuation(const BigInt& x, const BigInt& p) {
  if (x == 0) throw Error(ErrorKind::math, "valuation of zero");
  mpz_class rest;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

int valuation(const BigInt& x, uint64_t p) {
  return valuation(x, BigInt(static_cast<unsigned long>(p)));
}

BigInt eval_form(const Cubic& f, const BigInt& x, const BigInt& y) {
  BigInt x2 = x * x, y2 = y * y;
  return f[0] * x2 * x + f[1] * x2 * y + f[2] * x * y2 + f[3] * y2 * y;
}

namespace {

// Dense polynomials over F_p, coefficient i is the x^i term.
using Poly = std::vector<uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, uint64_t p) {
  trim(a);
  const uint64_t lead_inv = invmod(m.back(), p);
  while (a.size() >= m.size()) {
    uint64_t coef = mulmod(a.back(), lead_inv, p);
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) {
      uint64_t sub = mulmod(coef, m[i], p);
      a[shift + i] = (a[shift + i] + p - sub) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
  return poly_mod(std::move(c), m, p);
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, uint64_t p) {
  Poly r{1};
  base = poly_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    uint64_t inv = invmod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

uint64_t poly_eval(const Poly& a, uint64_t x, uint64_t p) {
  uint64_t r = 0;
  for (size_t i = a.size(); i-- > 0;) r = (mulmod(r, x, p) + a[i]) % p;
  return r;
}

// Roots of a monic squarefree polynomial that splits into distinct linear factors.
void split_roots(const Poly& g, uint64_t p, std::vector<uint64_t>& out) {
  if (g.size() <= 1) return;
  if (g.size() == 2) {
    out.push_back((p - g[0]) % p);
    return;
  }
  if (g.size() == 3 && p > 2) {
    // x^2 + b x + c
    uint64_t b = g[1], c = g[0];
    uint64_t disc = (mulmod(b, b, p) + p - mulmod(4 % p, c, p)) % p;
    uint64_t r = sqrtmod(disc, p), inv2 = invmod(2, p);
    out.push_back(mulmod((p - b + r) % p, inv2, p));
    out.push_back(mulmod((2 * p - b - r) % p, inv2, p));
    return;
  }
  for (uint64_t delta = 0;; ++delta) {
    Poly h = poly_powmod(Poly{delta % p, 1}, (p - 1) / 2, g, p);
    if (h.empty()) h = {p - 1};
    else h[0] = (h[0] + p - 1) % p;
    trim(h);
    Poly d = poly_gcd(g, h, p);
    if (d.size() > 1 && d.size() < g.size()) {
      split_roots(d, p, out);
      // g / d by long division
      Poly q(g.size() - d.size() + 1, 0), rem = g;
      for (size_t i = q.size(); i-- > 0;) {
        q[i] = rem[i + d.size() - 1];
        for (size_t j = 0; j < d.size(); ++j)
          rem[i + j] = (rem[i + j] + p - mulmod(q[i], d[j], p)) % p;
      }
      split_roots(q, p, out);
      return;
    }
  }
}

// Multiplicity of r as a root of a (a(r) = 0 assumed), via the Taylor shift.
int multiplicity(Poly a, uint64_t r, uint64_t p) {
  int m = 0;
  while (!a.empty() && poly_eval(a, r, p) == 0) {
    ++m;
    // divide by (x - r): synthetic division
    Poly q(a.size() - 1, 0);
    uint64_t carry = 0;
    for (size_t i = a.size(); i-- > 1;) {
      carry = (a[i] + mulmod(carry, r, p)) % p;
      q[i - 1] = carry;
    }
    a = std::move(q);
    trim(a);
  }
  return m;
}

}  // namespace

std::vector<ProjRoot> roots_mod_p(const Cubic& f, uint64_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::math, "roots_mod_p: modulus not prime");
  Poly a{mod_u64(f[3], p), mod_u64(f[2], p), mod_u64(f[1], p), mod_u64(f[0], p)};
  trim(a);
  if (a.empty()) throw Error(ErrorKind::math, "roots_mod_p: form vanishes identically mod p");
  const int deg = static_cast<int>(a.size()) - 1;
  std::vector<uint64_t> affine;
  if (p < 10000) {
    for (uint64_t r = 0; r < p; ++r)
      if (poly_eval(a, r, p) == 0) affine.push_back(r);
  } else if (deg > 0) {
    uint64_t inv = invmod(a.back(), p);
    Poly monic = a;
    for (auto& c : monic) c = mulmod(c, inv, p);
    Poly xp = poly_powmod(Poly{0, 1}, p, monic, p);
    xp.resize(std::max<size_t>(xp.size(), 2), 0);
    xp[1] = (xp[1] + p - 1) % p;
    trim(xp);
    Poly g = xp.empty() ? monic : poly_gcd(monic, xp, p);
    split_roots(g, p, affine);
    std::sort(affine.begin(), affine.end());
  }
  std::vector<ProjRoot> out;
  for (uint64_t r : affine) out.push_back({r, 1, multiplicity(a, r, p)});
  if (deg < 3) out.push_back({1, 0, 3 - deg});
  return out;
}

std::vector<ProjRoot> roots_mod_p(const Cubic& f, const BigInt& p) {
  if (p < 2 || !is_prime(p)) throw Error(ErrorKind::math, "roots_mod_p: modulus not prime");
  if (mpz_sizeinbase(p.get_mpz_t(), 2) > 62)
    throw Error(ErrorKind::budget, "roots_mod_p: primes above 2^62 unsupported");
  return roots_mod_p(f, static_cast<uint64_t>(p.get_ui()));
}

int legendre_additive(const BigInt& x, const BigInt& p) {
  if (p < 3 || mpz_even_p(p.get_mpz_t()))
    throw Error(ErrorKind::math, "legendre_additive: modulus must be an odd prime");
  int l = mpz_legendre(x.get_mpz_t(), p.get_mpz_t());
  if (l == 0) throw Error(ErrorKind::math, "legendre_additive: p divides x");
  return l == 1 ? 0 : 1;
}

int legendre_additive(uint64_t x, uint64_t p) {
  if (p < 3 || (p & 1) == 0) throw Error(ErrorKind::math, "legendre_additive: modulus must be an odd prime");
  x %= p;
  if (x == 0) throw Error(ErrorKind::math, "legendre_additive: p divides x");
  return powmod(x, (p - 1) / 2, p) == 1 ? 0 : 1;
}

namespace {

// rho on [k-1, k] as sum_m coef[k][m] (k - u)^m. The continuity step
// a_0 = rho(k-1) - sum_{m>=1} a_m cancels heavily, hence the wide type.
struct RhoTable {
  static constexpr int kTerms = 130;
  std::deque<std::vector<RealWide>> coef;  // deque keeps references stable
  std::mutex mu;

  const std::vector<RealWide>& interval(int k) {
    std::lock_guard<std::mutex> lock(mu);
    if (coef.empty()) {
      coef.emplace_back();  // unused slot 0
      std::vector<RealWide> one(kTerms, RealWide(0));
      one[0] = 1;
      coef.push_back(one);
    }
    while (static_cast<int>(coef.size()) <= k) {
      const int kk = static_cast<int>(coef.size());
      const auto& b = coef.back();
      std::vector<RealWide> a(kTerms, RealWide(0));
      for (int m = 0; m + 1 < kTerms; ++m) a[m + 1] = (b[m] + m * a[m]) / (RealWide(kk) * (m + 1));
      RealWide tail = 0;
      for (int m = 1; m < kTerms; ++m) tail += a[m];
      a[0] = b[0] - tail;
      coef.push_back(std::move(a));
    }
    return coef[k];
  }
};

RhoTable& rho_table() {
  static RhoTable t;
  return t;
}

}  // namespace

Real dickman_rho(const Real& u) {
  if (u < 0) throw Error(ErrorKind::math, "dickman_rho: negative argument");
  if (u <= 1) return Real(1);
  using boost::multiprecision::ceil;
  int k = static_cast<int>(ceil(u));
  const auto& a = rho_table().interval(k);
  RealWide xi = RealWide(k) - RealWide(u);
  RealWide s = 0;
  for (size_t m = a.size(); m-- > 0;) s = s * xi + a[m];
  return Real(s);
}

}  // namespace ecrank

namespace ecrank {

CubicRoots cubic_roots(const Cubic& f) {
  if (f[0] == 0) throw Error(ErrorKind::math, "cubic_roots: leading coefficient is zero");
  using boost::multiprecision::acos;
  using boost::multiprecision::cbrt;
  using boost::multiprecision::cos;
  using boost::multiprecision::sqrt;
  const RealWide a = to_real<RealWide>(f[0]), b = to_real<RealWide>(f[1]), c = to_real<RealWide>(f[2]),
                 d = to_real<RealWide>(f[3]);
  const RealWide P = (3 * a * c - b * b) / (3 * a * a);
  const RealWide Q = (2 * b * b * b - 9 * a * b * c + 27 * a * a * d) / (27 * a * a * a);
  const RealWide shift = -b / (3 * a);
  const BigInt disc = f[1] * f[1] * f[2] * f[2] - 4 * f[0] * f[2] * f[2] * f[2] - 4 * f[1] * f[1] * f[1] * f[3] -
                      27 * f[0] * f[0] * f[3] * f[3] + 18 * f[0] * f[1] * f[2] * f[3];
  CubicRoots out;
  auto polish = [&](RealWide x) {
    for (int i = 0; i < 8; ++i) {
      RealWide fx = ((a * x + b) * x + c) * x + d;
      RealWide dfx = (3 * a * x + 2 * b) * x + c;
      if (dfx == 0) break;
      x -= fx / dfx;
    }
    return x;
  };
  if (disc > 0) {
    const RealWide m = 2 * sqrt(-P / 3);
    const RealWide theta = acos(3 * Q / (P * m)) / 3;
    const RealWide two_pi_3 = 2 * pi<RealWide>() / 3;
    for (int k = 0; k < 3; ++k) out.real.push_back(polish(m * cos(theta - two_pi_3 * k) + shift));
    std::sort(out.real.begin(), out.real.end());
  } else if (disc < 0) {
    const RealWide s = sqrt(Q * Q / 4 + P * P * P / 27);
    const RealWide t0 = cbrt(-Q / 2 + s) + cbrt(-Q / 2 - s);
    const RealWide x0 = polish(t0 + shift);
    out.real.push_back(x0);
    // Deflate: a x^2 + (b + a x0) x + (c + (b + a x0) x0)
    const RealWide qb = b + a * x0, qc = c + qb * x0;
    out.re = -qb / (2 * a);
    out.im = sqrt(4 * a * qc - qb * qb) / (2 * a);
    if (out.im < 0) out.im = -out.im;
  } else {
    throw Error(ErrorKind::math, "cubic_roots: zero discriminant");
  }
  return out;
}

std::optional<std::pair<BigInt, BigInt>> rational_root(const Cubic& f) {
  if (f[0] == 0) return std::make_pair(BigInt(1), BigInt(0));
  if (f[3] == 0) return std::make_pair(BigInt(0), BigInt(1));
  // A rational root forces a root mod every prime not dividing c3.
  for (uint64_t p : primes_below(2000)) {
    if (mod_u64(f[0], p) == 0) continue;
    if (roots_mod_p(f, p).empty()) return std::nullopt;
  }
  BigInt disc = f[1] * f[1] * f[2] * f[2] - 4 * f[0] * f[2] * f[2] * f[2] - 4 * f[1] * f[1] * f[1] * f[3] -
                27 * f[0] * f[0] * f[3] * f[3] + 18 * f[0] * f[1] * f[2] * f[3];
  std::vector<RealWide> reals;
  if (disc != 0) {
    reals = cubic_roots(f).real;
  } else {
    // Repeated root: it is rational, and a root of gcd(F, F'); scan the
    // critical points of F(x,1).
    using boost::multiprecision::sqrt;
    const RealWide a = to_real<RealWide>(f[0]), b = to_real<RealWide>(f[1]), c = to_real<RealWide>(f[2]);
    RealWide dd = 4 * b * b - 12 * a * c;
    if (dd >= 0) {
      reals.push_back((-2 * b + sqrt(dd)) / (6 * a));
      reals.push_back((-2 * b - sqrt(dd)) / (6 * a));
    }
  }
  for (const RealWide& x : reals) {
    // Continued-fraction convergents of x; a rational root m/n has n | c3.
    BigInt h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    RealWide y = x;
    BigInt c3abs = abs(f[0]);
    for (int step = 0; step < 200; ++step) {
      using boost::multiprecision::floor;
      RealWide fl = floor(y);
      BigInt q(fl.convert_to<boost::multiprecision::cpp_int>().str());
      BigInt h2 = q * h1 + h0, k2 = q * k1 + k0;
      h0 = h1, h1 = h2, k0 = k1, k1 = k2;
      if (k1 > c3abs) break;
      if (eval_form(f, h1, k1) == 0) return std::make_pair(h1, k1);
      RealWide frac = y - fl;
      if (frac < RealWide("1e-80")) break;
      y = 1 / frac;
    }
  }
  throw Error(ErrorKind::math, "rational_root: could not decide reducibility");
}

}  // namespace ecrank
