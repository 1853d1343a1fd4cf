#include "wrt/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <omp.h>

namespace wrt {

double JointDegreePmf::total() const {
  double s = 0.0;
  for (const auto& [_, p] : table) s += p;
  return s;
}

std::vector<double> JointDegreePmf::marginal(std::size_t idx) const {
  if (idx >= targets.size()) throw std::out_of_range("target index");
  std::vector<double> out;
  for (const auto& [degrees, p] : table) {
    if (degrees[idx] >= out.size()) out.resize(degrees[idx] + 1, 0.0);
    out[degrees[idx]] += p;
  }
  return out;
}

nlohmann::json JointDegreePmf::toJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [degrees, p] : table) rows.push_back({{"degrees", degrees}, {"p", p}});
  return {{"targets", targets}, {"table", rows}};
}

JointDegreePmf enumerateExact(std::span<const double> weights, std::span<const Vertex> targets) {
  const std::size_t n = weights.size();
  if (n == 0 || n > kMaxEnumerationSize)
    throw std::invalid_argument("enumerateExact supports 1 <= n <= " + std::to_string(kMaxEnumerationSize));
  for (Vertex t : targets)
    if (t < 1 || t > n) throw std::invalid_argument("target vertex outside [1, n]");

  std::vector<double> logW(n), logS(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0)) throw std::invalid_argument("weights must be positive");
    logW[i] = std::log(weights[i]);
    s += weights[i];
    logS[i] = std::log(s);
  }

  JointDegreePmf out;
  out.targets.assign(targets.begin(), targets.end());
  // digit[i] is the 0-based parent of vertex i+1 (i >= 1), radix i.
  std::vector<std::size_t> digit(n, 0);
  std::vector<std::uint32_t> degree(n), key(targets.size());
  for (;;) {
    double logP = 0.0;
    std::fill(degree.begin(), degree.end(), 0u);
    for (std::size_t i = 1; i < n; ++i) {
      logP += logW[digit[i]] - logS[i - 1];
      ++degree[digit[i]];
    }
    for (std::size_t t = 0; t < targets.size(); ++t) key[t] = degree[targets[t] - 1];
    out.table[key] += std::exp(logP);

    std::size_t pos = n;
    for (std::size_t i = 1; i < n; ++i) {
      if (++digit[i] < i) {
        pos = i;
        break;
      }
      digit[i] = 0;
    }
    if (pos == n) break;
  }
  return out;
}

namespace {

// Degree law of vertex j given prefix sums; p_i = W_j / S_i for i = j..n-1.
void poissonBinomial(std::span<const double> weights, std::span<const double> prefix, std::size_t j,
                     std::size_t cap, std::vector<double>& dp) {
  const std::size_t n = weights.size();
  const std::size_t trials = n - j;
  const std::size_t cells = cap > 0 ? cap + 1 : trials + 1;
  dp.assign(cells, 0.0);
  dp[0] = 1.0;
  std::size_t reach = 0;  // highest cell that may be nonzero
  for (std::size_t i = j; i < n; ++i) {
    const double p = weights[j - 1] / prefix[i - 1];
    const double q = 1.0 - p;
    if (reach + 1 < cells) ++reach;
    if (cap > 0 && reach == cap) dp[cap] += dp[cap - 1] * p;
    const std::size_t top = (cap > 0 && reach == cap) ? cap - 1 : reach;
    for (std::size_t m = top; m > 0; --m) dp[m] = dp[m] * q + dp[m - 1] * p;
    dp[0] *= q;
  }
}

std::vector<double> prefixSums(std::span<const double> weights) {
  CumIndex index(weights);
  std::vector<double> prefix(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) prefix[i] = index.prefix(i + 1);
  return prefix;
}

bool deterministicLaw(const WeightLaw& law) { return law.continuousMass() == 0.0 && law.atoms().size() == 1; }

// Runs `replicate(r, out)` for every weight replicate into row r of a
// replicates x cells buffer, then reduces rows in index order so the result
// does not depend on scheduling.
template <class Kernel>
DegreeLaw averageReplicates(std::size_t replicates, std::size_t cells, bool parallel, bool lumped,
                            Kernel&& replicate) {
  std::vector<double> rows(replicates * cells, 0.0);
#pragma omp parallel if (parallel)
  {
    std::vector<double> scratch;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(replicates); ++r) {
      replicate(static_cast<std::size_t>(r), std::span<double>(rows.data() + r * cells, cells), scratch);
    }
  }
  DegreeLaw out;
  out.replicates = replicates;
  out.lumpedTail = lumped;
  out.pmf.assign(cells, 0.0);
  out.stdError.assign(cells, 0.0);
  for (std::size_t r = 0; r < replicates; ++r)
    for (std::size_t k = 0; k < cells; ++k) out.pmf[k] += rows[r * cells + k];
  for (auto& v : out.pmf) v /= static_cast<double>(replicates);
  if (replicates >= 2) {
    for (std::size_t r = 0; r < replicates; ++r)
      for (std::size_t k = 0; k < cells; ++k) {
        const double d = rows[r * cells + k] - out.pmf[k];
        out.stdError[k] += d * d;
      }
    for (auto& v : out.stdError) v = std::sqrt(v / (replicates - 1) / replicates);
  }
  return out;
}

void checkOptions(std::size_t n, const OracleOptions& opt) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (opt.replicates == 0) throw std::invalid_argument("need at least one weight replicate");
}

}  // namespace

std::vector<double> poissonBinomialMarginal(std::span<const double> weights, Vertex j, std::size_t cap) {
  if (j < 1 || j > weights.size()) throw std::invalid_argument("vertex outside [1, n]");
  std::vector<double> dp;
  poissonBinomial(weights, prefixSums(weights), j, cap, dp);
  return dp;
}

nlohmann::json DegreeLaw::toJson() const {
  return {{"pmf", pmf}, {"stderr", stdError}, {"replicates", replicates}, {"lumped_tail", lumpedTail}};
}

DegreeLaw unconditionalDegreeLaw(const WeightLaw& law, std::size_t n, Vertex j, const OracleOptions& opt) {
  checkOptions(n, opt);
  if (j < 1 || j > n) throw std::invalid_argument("vertex outside [1, n]");
  const std::size_t cells = opt.cap > 0 ? opt.cap + 1 : n - j + 1;
  const std::size_t reps = deterministicLaw(law) ? 1 : opt.replicates;
  auto out = averageReplicates(reps, cells, opt.parallel, opt.cap > 0,
                               [&](std::size_t r, std::span<double> row, std::vector<double>& dp) {
                                 RandomStream rng(substreamSeed(opt.seed, r));
                                 const auto w = sampleWeights(law, n, rng);
                                 poissonBinomial(w, prefixSums(w), j, opt.cap, dp);
                                 std::copy(dp.begin(), dp.end(), row.begin());
                               });
  out.replicates = opt.replicates;
  return out;
}

DegreeLaw uniformVertexDegreeLaw(const WeightLaw& law, std::size_t n, const OracleOptions& opt) {
  checkOptions(n, opt);
  const std::size_t cells = opt.cap > 0 ? opt.cap + 1 : n;
  const std::size_t reps = deterministicLaw(law) ? 1 : opt.replicates;
  auto out = averageReplicates(reps, cells, opt.parallel, opt.cap > 0,
                               [&](std::size_t r, std::span<double> row, std::vector<double>& dp) {
                                 RandomStream rng(substreamSeed(opt.seed, r));
                                 const auto w = sampleWeights(law, n, rng);
                                 const auto prefix = prefixSums(w);
                                 for (std::size_t j = 1; j <= n; ++j) {
                                   poissonBinomial(w, prefix, j, opt.cap, dp);
                                   for (std::size_t k = 0; k < dp.size(); ++k) row[k] += dp[k];
                                 }
                                 for (auto& v : row) v /= static_cast<double>(n);
                               });
  out.replicates = opt.replicates;
  return out;
}

}  // namespace wrt
