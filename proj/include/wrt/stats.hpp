#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wrt/asymptotics.hpp"
#include "wrt/simulate.hpp"

namespace wrt {

/// Closed range of bucket offsets relative to floor(c(n)).
struct Window {
  int lo = -5;
  int hi = 5;

  friend bool operator==(const Window&, const Window&) = default;
};

/// Parses "iLo:iHi". Throws std::invalid_argument on malformed or empty ranges.
Window parseWindow(const std::string& text);

struct DegreeCensus {
  std::int64_t floorCenter = 0;
  double eps = 0.0;
  Window window;
  /// xi[i - window.lo]: vertices with degree floorCenter + i.
  std::vector<std::int64_t> xi;
  /// xGeq[i - window.lo]: vertices with degree >= floorCenter + i.
  std::vector<std::int64_t> xGeq;
  std::uint32_t maxDegree = 0;
  std::int64_t numMaximizers = 0;

  bool contains(int i) const { return i >= window.lo && i <= window.hi; }
  std::int64_t x(int i) const { return xi.at(i - window.lo); }
  std::int64_t geq(int i) const { return xGeq.at(i - window.lo); }
  /// Whether the maximum degree reaches floorCenter + i.
  bool maxAtLeast(int i) const { return static_cast<std::int64_t>(maxDegree) >= floorCenter + i; }

  nlohmann::json toJson() const;
  static DegreeCensus fromJson(const nlohmann::json& j);
  friend bool operator==(const DegreeCensus&, const DegreeCensus&) = default;
};

DegreeCensus census(std::span<const std::uint32_t> inDegrees, const Centering& centering, Window window);
DegreeCensus census(const Wrt& tree, const Centering& centering, Window window);

/// (x)_a = x(x-1)...(x-a+1), with (x)_0 = 1.
std::int64_t fallingFactorial(std::int64_t x, int a);

struct MomentEstimate {
  double value = 0.0;
  double stdError = 0.0;
  std::int64_t count = 0;
};

/// Orders a_i for bucket counts X_i, plus an optional order for a tail count
/// X_{>=i'}.
struct FactorialOrders {
  std::map<int, int> exact;
  std::optional<std::pair<int, int>> tail;
};

/// Sample mean and standard error of prod (X_i)_{a_i} (X_{>=i'})_{a'} across
/// replicates. Throws std::invalid_argument for fewer than two samples or
/// buckets outside the census window.
MomentEstimate factorialMomentEstimate(std::span<const DegreeCensus> samples, const FactorialOrders& orders);

struct MeanEstimate {
  double mean = 0.0;
  double stdError = 0.0;
};

/// Sample mean and standard error of the mean.
MeanEstimate meanEstimate(std::span<const double> values);

struct FitReport {
  double tvDistance = 0.0;
  double chiSq = 0.0;
  int dof = 0;
  double chiSqPValue = 1.0;
};

double poissonPmf(double mean, std::int64_t k);

/// Goodness of fit of integer samples to Poisson(mean). Chi-square cells are
/// pooled left to right until each expected count is at least 5; the last
/// cell absorbs the upper tail. Requires mean > 0 and at least 500 samples.
FitReport poissonFit(std::span<const std::int64_t> samples, double mean);

struct NormalityReport {
  double ksStat = 0.0;
  double skewness = 0.0;
  /// Skewness divided by its null standard error sqrt(6/N).
  double standardizedSkew = 0.0;
};

/// One-sample Kolmogorov-Smirnov statistic of (x - mean)/sd against the
/// standard normal, and the sample skewness.
NormalityReport normalityCheck(std::span<const double> samples, double predictedMean, double predictedSd);

/// Columns i, mean_xi, stderr, predicted_mean over the common census window.
std::string bucketSummaryCsv(std::span<const DegreeCensus> samples, const Centering& centering, double n);

}  // namespace wrt
