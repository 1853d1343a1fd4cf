#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wrt/asymptotics.hpp"
#include "wrt/simulate.hpp"
#include "wrt/stats.hpp"
#include "wrt/weights.hpp"

namespace wrt {

constexpr int kSchemaVersion = 1;

struct ReplicateResult {
  DegreeCensus census;
  std::size_t edges = 0;
};

struct ReplicatePlan {
  WeightLaw law = WeightLaw::constant(1.0);
  std::size_t n = 1;
  AttachMode mode = AttachMode::FixedOne;
  std::uint64_t seed = 1;
  Window window;
};

/// Grows replicates [first, first+count) with seeds substreamSeed(seed, r)
/// and returns their censuses in replicate order. The OpenMP kernel and the
/// serial reference produce identical results.
std::vector<ReplicateResult> runReplicates(const ReplicatePlan& plan, std::size_t first, std::size_t count);
std::vector<ReplicateResult> runReplicatesSerial(const ReplicatePlan& plan, std::size_t first, std::size_t count);

struct RunRecord {
  int schemaVersion = kSchemaVersion;
  WeightLaw law = WeightLaw::constant(1.0);
  std::size_t n = 1;
  AttachMode mode = AttachMode::FixedOne;
  std::uint64_t seed = 1;
  std::size_t replicate = 0;
  DegreeCensus census;
  std::size_t edges = 0;
  std::string timestamp;

  nlohmann::json toJson() const;
  /// Throws std::invalid_argument on an unknown schema version.
  static RunRecord fromJson(const nlohmann::json& j);
};

/// Reads a JSONL record file. A truncated final line (interrupted append) is
/// ignored; any other malformed line is an error.
std::vector<RunRecord> readRecords(const std::filesystem::path& path);

struct ExperimentConfig {
  ReplicatePlan plan;
  std::size_t replicates = 1;
  std::filesystem::path out;
  /// Worker threads; 0 keeps the OpenMP default.
  int parallel = 0;
  std::optional<std::filesystem::path> treeDump;

  void validate() const;
};

/// Appends the missing replicates to config.out, in index order, resuming
/// after the last complete record already present. Returns the number of
/// records written by this call.
std::size_t runSimulate(const ExperimentConfig& config);

struct ClaimResult {
  std::string name;
  bool pass = false;
  bool hard = true;
  double statistic = 0.0;
  double prediction = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct VerifyOptions {
  std::vector<int> meanBuckets{0, 1, 2};
  std::vector<int> tailBuckets{1, 2, 3};
  std::vector<int> maximizerCounts{1, 2, 3};
  int poissonBucket = 2;
  double meanSe = 3.0;
  double maximizerSe = 4.0;
  double tvTolerance = 0.05;
};

struct VerifyReport {
  std::vector<ClaimResult> claims;
  nlohmann::json summary;

  bool hardFailure() const;
  nlohmann::json toJson() const;
  std::string table() const;
};

VerifyReport verifyRecords(const std::vector<RunRecord>& records, const VerifyOptions& opt = {});
VerifyReport runVerify(const std::filesystem::path& records, const VerifyOptions& opt = {});

/// {case, theta, centering_terms, eps_n, intensity_const, second_order_limit}.
nlohmann::json predictJson(const Centering& centering, double n);
nlohmann::json runPredict(const WeightLaw& law, double n);

/// CSV with columns k, pk_quadrature, pk_closed, pk_asymptotic, lower_bound,
/// upper_bound. pk_closed is empty for laws without a closed form.
std::string runTable(const WeightLaw& law, int kLo, int kHi, double xi);

/// ISO-8601 UTC time stamp.
std::string utcTimestamp();

}  // namespace wrt
