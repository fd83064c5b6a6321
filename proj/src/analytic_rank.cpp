#include "ecrank/analytic_rank.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace ecrank {

std::vector<LocalAp> local_ap_table(const EllipticCurve& e, uint64_t cutoff, const ApCache* cache,
                                    uint64_t count_budget) {
  const BigInt disc = invariants(e).disc;
  std::vector<LocalAp> out;
  for (uint64_t p : primes_in(2, cutoff + 1)) {
    if (mpz_divisible_ui_p(disc.get_mpz_t(), p)) {
      auto ld = tate_local(e, BigInt(static_cast<unsigned long>(p)));
      LocalKind kind = LocalKind::good;
      if (ld.type == Reduction::additive)
        kind = LocalKind::additive;
      else if (ld.type != Reduction::good)
        kind = LocalKind::multiplicative;
      out.push_back({p, ld.a_p.get_si(), kind});
      continue;
    }
    if (cache) {
      auto it = cache->find(p);
      if (it != cache->end()) {
        out.push_back({p, it->second, LocalKind::good});
        continue;
      }
    }
    if (p > count_budget)
      throw Error(ErrorKind::budget, "no a_p for p=" + std::to_string(p) + " within the counting budget; supply a cache");
    out.push_back({p, count_ap(e, p).get_si(), LocalKind::good});
  }
  return out;
}

std::optional<long> parity_refine(const Real& raw, std::optional<int> root_number) {
  if (!root_number) return std::nullopt;
  if (*root_number != 1 && *root_number != -1) throw Error(ErrorKind::usage, "root number must be +1 or -1");
  long v = static_cast<long>(floor(raw).convert_to<double>());
  const int want = *root_number == 1 ? 0 : 1;
  if (((v % 2) + 2) % 2 != want) --v;
  return v;
}

AnalyticBound analytic_rank_bound(const EllipticCurve& e, const AnalyticBoundParams& params, const ApCache* cache) {
  if (params.delta < 1) throw Error(ErrorKind::usage, "Delta must be at least 1");
  AnalyticBound b;
  b.cutoff = prime_cutoff(params.delta);
  if (b.cutoff > params.count_budget && !cache)
    throw Error(ErrorKind::budget, "exp(2 pi Delta) = " + std::to_string(b.cutoff) +
                                       " exceeds the counting budget; supply an a_p cache");
  auto table = local_ap_table(e, b.cutoff, cache, params.count_budget);
  b.arithmetic = arithmetic_term(table, params.delta);
  b.archimedean = archimedean_term(params.delta);
  b.conductor = conductor_term(params.conductor, params.delta);
  b.raw = b.arithmetic + b.archimedean + b.conductor;
  b.parity_refined = parity_refine(b.raw, params.root_number);
  return b;
}

ApCache read_ap_cache(std::istream& in) {
  ApCache c;
  std::string line;
  uint64_t last = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    uint64_t p;
    long a;
    if (!(ls >> p >> a)) throw Error(ErrorKind::data, "a_p cache: malformed line '" + line + "'");
    if (p <= last) throw Error(ErrorKind::data, "a_p cache: primes not strictly ascending at " + std::to_string(p));
    last = p;
    c[p] = a;
  }
  return c;
}

void write_ap_cache(std::ostream& out, const ApCache& cache) {
  for (auto& [p, a] : cache) out << p << ' ' << a << '\n';
}

}  // namespace ecrank
