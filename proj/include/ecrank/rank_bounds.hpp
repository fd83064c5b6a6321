// Brumer-Kramer bound dim Sel2(E/Q) <= g + u + n with the root-number parity
// refinement, and the rank sandwich built from it.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecrank/cubic_field.hpp"
#include "ecrank/elliptic.hpp"

namespace ecrank {

struct BKTerms {
  int g = 0;  // bound on dim Cl(K)[2]
  int u = 1;  // 1 if disc < 0, 2 if disc > 0
  int n = 0;  // #phi_m + sum over phi_a of (n_p - 1)
  std::vector<BigInt> phi_m;                 // multiplicative, ord_p disc even
  std::vector<std::pair<BigInt, int>> phi_a;  // additive, with n_p
  std::optional<int> root_number;
  std::optional<int> known_rank_lower;
};

// Number of primes of K over p, read off the factorization of the (maximal)
// form mod p.
int primes_above(const CubicField& k, const BigInt& p);

// `local` must cover every prime dividing disc(E) except those in
// `residual`, a product of further bad primes each dividing disc(E) exactly
// once (they are multiplicative with odd ord and contribute nothing).
// Throws a data error naming the first uncovered prime, or reporting the
// uncovered part of the discriminant.
BKTerms compute_bk_terms(const EllipticCurve& e, const std::vector<LocalReductionData>& local, const CubicField& k,
                         int g, const BigInt& residual = 1);

// g + u + n, less one when the parity of dim Sel2 forced by the root number
// disagrees. E(Q)[2] = 0 is assumed.
int selmer_upper_bound(const BKTerms& t);

struct RankReport {
  int raw_bound = 0;       // g + u + n
  int selmer_bound = 0;    // after parity
  std::optional<int> rank_lower;
  std::optional<int> g_lower;  // known_rank_lower - u - n
  bool determined = false;     // rank_lower == selmer_bound
  std::string text;
};

// Throws a data error when the known lower bound exceeds the Selmer bound.
RankReport rank_report(const BKTerms& t);

// "r g u n eps sel" in the column layout of the published table.
std::string table_row(int r, const BKTerms& t);

}  // namespace ecrank
