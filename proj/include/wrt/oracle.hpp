#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <json.hpp>

#include "wrt/simulate.hpp"
#include "wrt/weights.hpp"

namespace wrt {

/// Exact joint law of the in-degrees of `targets` under fixed weights.
struct JointDegreePmf {
  std::vector<Vertex> targets;
  std::map<std::vector<std::uint32_t>, double> table;

  double total() const;
  /// Marginal pmf of the idx-th target, indexed by degree.
  std::vector<double> marginal(std::size_t idx) const;
  nlohmann::json toJson() const;
};

constexpr std::size_t kMaxEnumerationSize = 8;

/// Enumerates all prod_{i=2}^n (i-1) parent sequences. Throws
/// std::invalid_argument for n > 8 or targets outside [1, n].
JointDegreePmf enumerateExact(std::span<const double> weights, std::span<const Vertex> targets);

/// Exact law of the in-degree of vertex j given the weights: a sum of
/// independent Bernoulli(W_j / S_i), i = j..n-1. With cap > 0 the pmf has
/// cap+1 cells and the last one holds P(degree >= cap).
std::vector<double> poissonBinomialMarginal(std::span<const double> weights, Vertex j, std::size_t cap = 0);

/// Weight-averaged degree pmf with per-cell standard errors.
struct DegreeLaw {
  std::vector<double> pmf;
  std::vector<double> stdError;
  std::size_t replicates = 0;
  /// Whether the last cell lumps all larger degrees.
  bool lumpedTail = false;

  nlohmann::json toJson() const;
};

struct OracleOptions {
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  /// Lump degrees >= cap into the last cell; 0 keeps the full support.
  std::size_t cap = 0;
  bool parallel = true;
};

/// Average over independent weight vectors of the exact conditional law of
/// vertex j's in-degree. Weight replicate r uses substreamSeed(seed, r).
DegreeLaw unconditionalDegreeLaw(const WeightLaw& law, std::size_t n, Vertex j, const OracleOptions& opt);

/// Same, for a uniformly chosen vertex: averages the conditional law over
/// j = 1..n within each weight replicate.
DegreeLaw uniformVertexDegreeLaw(const WeightLaw& law, std::size_t n, const OracleOptions& opt);

}  // namespace wrt
