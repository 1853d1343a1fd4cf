#include "wrt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "wrt/degdist.hpp"

namespace wrt {

namespace fs = std::filesystem;

std::vector<ReplicateResult> runReplicates(const ReplicatePlan& plan, std::size_t first, std::size_t count) {
  const Centering centering = centeringFor(plan.law);
  std::vector<ReplicateResult> out(count);
#pragma omp parallel
  {
    InDegreeWorkspace ws;
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      growInDegrees(plan.law, plan.n, plan.mode, substreamSeed(plan.seed, first + i), ws);
      out[i] = {census(ws.inDegrees, centering, plan.window), ws.edges};
    }
  }
  return out;
}

std::vector<ReplicateResult> runReplicatesSerial(const ReplicatePlan& plan, std::size_t first, std::size_t count) {
  const Centering centering = centeringFor(plan.law);
  std::vector<ReplicateResult> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Wrt tree = generate(plan.law, plan.n, plan.mode, substreamSeed(plan.seed, first + i));
    const std::size_t edges = plan.mode == AttachMode::FixedOne ? tree.n - 1 : tree.edges.size();
    out.push_back({census(tree, centering, plan.window), edges});
  }
  return out;
}

nlohmann::json RunRecord::toJson() const {
  return {{"schema_version", schemaVersion},
          {"law", law.toJson()},
          {"n", n},
          {"mode", toString(mode)},
          {"seed", seed},
          {"replicate", replicate},
          {"census", census.toJson()},
          {"edges", edges},
          {"timestamp", timestamp}};
}

RunRecord RunRecord::fromJson(const nlohmann::json& j) {
  RunRecord r;
  r.schemaVersion = j.at("schema_version").get<int>();
  if (r.schemaVersion != kSchemaVersion)
    throw std::invalid_argument("unsupported record schema_version " + std::to_string(r.schemaVersion));
  r.law = WeightLaw::fromJson(j.at("law"));
  r.n = j.at("n").get<std::size_t>();
  r.mode = parseAttachMode(j.at("mode").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.replicate = j.at("replicate").get<std::size_t>();
  r.census = DegreeCensus::fromJson(j.at("census"));
  r.edges = j.at("edges").get<std::size_t>();
  r.timestamp = j.value("timestamp", "");
  return r;
}

namespace {

struct RecordFile {
  std::vector<RunRecord> records;
  std::uintmax_t validBytes = 0;
};

RecordFile scanRecords(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RecordFile out;
  std::size_t pos = 0;
  std::size_t lineNo = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    ++lineNo;
    if (nl == std::string::npos) break;  // unterminated tail from an interrupted write
    const std::string line = content.substr(pos, nl - pos);
    if (!line.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path.string() + ":" + std::to_string(lineNo) + ": " + e.what());
      }
      out.records.push_back(RunRecord::fromJson(j));
    }
    pos = nl + 1;
    out.validBytes = pos;
  }
  return out;
}

}  // namespace

std::vector<RunRecord> readRecords(const fs::path& path) { return scanRecords(path).records; }

void ExperimentConfig::validate() const {
  if (plan.n < 1) throw std::invalid_argument("n must be at least 1");
  if (plan.n > std::numeric_limits<Vertex>::max()) throw std::invalid_argument("n exceeds 32-bit vertex labels");
  if (replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  if (plan.window.lo > plan.window.hi) throw std::invalid_argument("census window is empty");
  if (out.empty()) throw std::invalid_argument("an output path is required");
  if (parallel < 0) throw std::invalid_argument("parallel must be nonnegative");
  centeringFor(plan.law);
}

std::string utcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::size_t runSimulate(const ExperimentConfig& config) {
  config.validate();
  const auto& plan = config.plan;
  if (config.parallel > 0) omp_set_num_threads(config.parallel);

  std::size_t done = 0;
  if (fs::exists(config.out)) {
    const auto existing = scanRecords(config.out);
    for (const auto& r : existing.records) {
      if (!(r.law == plan.law) || r.n != plan.n || r.mode != plan.mode || r.seed != plan.seed ||
          r.replicate != done)
        throw std::invalid_argument(config.out.string() + " holds records of a different run");
      ++done;
    }
    fs::resize_file(config.out, existing.validBytes);
  }

  if (config.treeDump) {
    const Wrt tree = generate(plan.law, plan.n, plan.mode, substreamSeed(plan.seed, 0));
    std::ofstream csv(*config.treeDump);
    if (!csv) throw std::runtime_error("cannot write " + config.treeDump->string());
    csv << edgeListCsv(tree);
    auto metaPath = *config.treeDump;
    metaPath += ".json";
    std::ofstream meta(metaPath);
    if (!meta) throw std::runtime_error("cannot write " + metaPath.string());
    meta << nlohmann::json{{"law", plan.law.toJson()}, {"n", plan.n}, {"mode", toString(plan.mode)},
                           {"seed", substreamSeed(plan.seed, 0)}}
                .dump()
         << '\n';
  }

  std::ofstream out(config.out, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + config.out.string());
  const std::size_t batch = std::max<std::size_t>(64, 16 * static_cast<std::size_t>(omp_get_max_threads()));
  std::size_t written = 0;
  for (std::size_t start = done; start < config.replicates; start += batch) {
    const std::size_t count = std::min(batch, config.replicates - start);
    const auto results = runReplicates(plan, start, count);
    for (std::size_t i = 0; i < count; ++i) {
      RunRecord rec;
      rec.law = plan.law;
      rec.n = plan.n;
      rec.mode = plan.mode;
      rec.seed = plan.seed;
      rec.replicate = start + i;
      rec.census = results[i].census;
      rec.edges = results[i].edges;
      rec.timestamp = utcTimestamp();
      out << rec.toJson().dump() << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + config.out.string());
    written += count;
  }
  return written;
}

bool VerifyReport::hardFailure() const {
  return std::any_of(claims.begin(), claims.end(), [](const ClaimResult& c) { return c.hard && !c.pass; });
}

nlohmann::json VerifyReport::toJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : claims)
    rows.push_back({{"claim", c.name},
                    {"pass", c.pass},
                    {"hard", c.hard},
                    {"statistic", c.statistic},
                    {"prediction", c.prediction},
                    {"tolerance", c.tolerance},
                    {"note", c.note}});
  return {{"summary", summary}, {"claims", rows}, {"hard_failure", hardFailure()}};
}

std::string VerifyReport::table() const {
  std::ostringstream os;
  os << std::left << std::setw(26) << "claim" << std::setw(14) << "statistic" << std::setw(14) << "prediction"
     << std::setw(12) << "tolerance" << "result\n";
  os << std::setprecision(6);
  for (const auto& c : claims) {
    os << std::left << std::setw(26) << c.name << std::setw(14) << c.statistic << std::setw(14) << c.prediction
       << std::setw(12) << c.tolerance << (c.pass ? "PASS" : (c.hard ? "FAIL" : "WARN"));
    if (!c.note.empty()) os << "  " << c.note;
    os << '\n';
  }
  return os.str();
}

namespace {

ClaimResult noData(const std::string& name, bool hard) {
  ClaimResult c;
  c.name = name;
  c.hard = hard;
  c.pass = false;
  c.note = "no data in window";
  return c;
}

ClaimResult withinSe(std::string name, double stat, double pred, double se, double k, bool hard) {
  ClaimResult c;
  c.name = std::move(name);
  c.statistic = stat;
  c.prediction = pred;
  c.tolerance = k * se;
  c.pass = std::abs(stat - pred) <= c.tolerance;
  c.hard = hard;
  return c;
}

}  // namespace

VerifyReport verifyRecords(const std::vector<RunRecord>& records, const VerifyOptions& opt) {
  if (records.empty()) throw std::invalid_argument("empty record set");
  const auto& first = records.front();
  for (const auto& r : records)
    if (!(r.law == first.law) || r.n != first.n || r.mode != first.mode ||
        r.census.window.lo != first.census.window.lo || r.census.window.hi != first.census.window.hi)
      throw std::invalid_argument("records mix different runs");

  const Centering centering = centeringFor(first.law);
  const double n = static_cast<double>(first.n);
  const std::size_t reps = records.size();
  const bool hard = first.mode == AttachMode::FixedOne;
  const auto& window = first.census.window;

  VerifyReport report;
  report.summary = {{"law", first.law.toJson()},      {"n", first.n},
                    {"mode", toString(first.mode)},   {"replicates", reps},
                    {"case", toString(centering.tag)}, {"theta", centering.theta},
                    {"floor_center", first.census.floorCenter}, {"eps_n", first.census.eps},
                    {"window", {window.lo, window.hi}}};
  if (!hard) report.summary["note"] = "random out-degree mode: predictions of the fixed mode reported, not enforced";

  std::int64_t occupied = 0;
  for (const auto& r : records) occupied += r.census.geq(window.lo);
  if (occupied == 0) report.claims.push_back(noData("window", hard));

  std::vector<double> values(reps);
  auto column = [&](auto&& f) {
    for (std::size_t r = 0; r < reps; ++r) values[r] = static_cast<double>(f(records[r]));
    return values;
  };

  for (int i : opt.meanBuckets) {
    const std::string xi = "mean X_" + std::to_string(i);
    const std::string xg = "mean X_>=" + std::to_string(i);
    if (!first.census.contains(i) || occupied == 0) {
      report.claims.push_back(noData(xi, hard));
      report.claims.push_back(noData(xg, hard));
      continue;
    }
    const auto pred = bucketMeans(centering, n, i);
    auto estimate = [&](const std::vector<double>& v) {
      return v.size() >= 2 ? meanEstimate(v) : MeanEstimate{v.front(), 0.0};
    };
    auto m = estimate(column([&](const RunRecord& r) { return r.census.x(i); }));
    report.claims.push_back(withinSe(xi, m.mean, pred.meanXi, m.stdError, opt.meanSe, hard));
    m = estimate(column([&](const RunRecord& r) { return r.census.geq(i); }));
    report.claims.push_back(withinSe(xg, m.mean, pred.meanXgeq, m.stdError, opt.meanSe, hard));
  }

  for (int i : opt.tailBuckets) {
    double hits = 0.0;
    for (const auto& r : records) hits += r.census.maxAtLeast(i) ? 1.0 : 0.0;
    const double pred = maxTailPrediction(centering, n, i);
    const double se = std::sqrt(pred * (1.0 - pred) / reps);
    report.claims.push_back(withinSe("P(max >= floor+" + std::to_string(i) + ")", hits / reps, pred, se,
                                     opt.meanSe, hard));
  }

  for (int k : opt.maximizerCounts) {
    double hits = 0.0;
    for (const auto& r : records) hits += r.census.numMaximizers == k ? 1.0 : 0.0;
    const double pred = maximizerCountPmf(centering, first.census.eps, k);
    const double se = std::sqrt(pred * (1.0 - pred) / reps);
    report.claims.push_back(withinSe("P(|M| = " + std::to_string(k) + ")", hits / reps, pred, se,
                                     opt.maximizerSe, hard));
  }

  {
    const std::string name = "Poisson fit X_" + std::to_string(opt.poissonBucket);
    if (!first.census.contains(opt.poissonBucket) || occupied == 0) {
      report.claims.push_back(noData(name, hard));
    } else if (reps < 500) {
      ClaimResult c;
      c.name = name;
      c.hard = false;
      c.note = "skipped: fewer than 500 replicates";
      report.claims.push_back(c);
    } else {
      std::vector<std::int64_t> samples(reps);
      for (std::size_t r = 0; r < reps; ++r) samples[r] = records[r].census.x(opt.poissonBucket);
      const double mean = bucketMeans(centering, n, opt.poissonBucket).meanXi;
      const auto fit = poissonFit(samples, mean);
      ClaimResult c;
      c.name = name;
      c.statistic = fit.tvDistance;
      c.prediction = 0.0;
      c.tolerance = opt.tvTolerance;
      c.pass = fit.tvDistance <= opt.tvTolerance;
      c.hard = hard;
      std::ostringstream note;
      note << "chi2=" << fit.chiSq << " dof=" << fit.dof << " p=" << fit.chiSqPValue;
      c.note = note.str();
      report.claims.push_back(c);
    }
  }
  return report;
}

VerifyReport runVerify(const fs::path& path, const VerifyOptions& opt) {
  return verifyRecords(readRecords(path), opt);
}

nlohmann::json predictJson(const Centering& centering, double n) {
  nlohmann::json j;
  j["case"] = toString(centering.tag);
  j["theta"] = centering.theta;
  j["centering_terms"] = centering.terms(n);
  j["eps_n"] = centering.epsN(n);
  j["intensity_const"] = centering.hasIntensity ? nlohmann::json(centering.intensityConst) : nlohmann::json();
  j["second_order_limit"] =
      centering.tag == CenteringCase::Atom ? nlohmann::json() : nlohmann::json(secondOrderLimit(centering));
  return j;
}

nlohmann::json runPredict(const WeightLaw& law, double n) {
  auto j = predictJson(centeringFor(law), n);
  j["law"] = law.toJson();
  j["n"] = n;
  return j;
}

std::string runTable(const WeightLaw& law, int kLo, int kHi, double xi) {
  if (kLo < 0 || kLo > kHi) throw std::invalid_argument("table needs 0 <= kLo <= kHi");
  const auto* beta = std::get_if<BetaLaw>(&law.variant());
  std::ostringstream os;
  os << std::setprecision(17);
  os << "k,pk_quadrature,pk_closed,pk_asymptotic,lower_bound,upper_bound\n";
  for (int k = kLo; k <= kHi; ++k) {
    os << k << ',' << pkQuadrature(law, k) << ',';
    if (beta) os << pkBetaClosedForm(beta->alpha, beta->beta, k);
    os << ',';
    if (k >= 1) {
      try {
        os << pkAsymptotic(law, k);
      } catch (const std::invalid_argument&) {
      }
    }
    const auto [lo, hi] = pkBounds(law, k, xi);
    os << ',' << lo << ',' << hi << '\n';
  }
  return os.str();
}

}  // namespace wrt
