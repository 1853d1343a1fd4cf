// wrtlab: simulate weighted recursive trees and check their degree statistics
// against the limit theory.
//
// Exit status: 0 success, 1 verification failure, 2 usage or configuration error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "wrt/asymptotics.hpp"
#include "wrt/experiment.hpp"
#include "wrt/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;

std::uint64_t resolveSeed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("WRTLAB_SEED")) {
    std::size_t used = 0;
    std::uint64_t value = 0;
    try {
      value = std::stoull(env, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || env[used] != '\0') throw std::invalid_argument(std::string("WRTLAB_SEED is not an integer: ") + env);
    return value;
  }
  return 1;
}

void emit(const std::string& text, const std::string& outPath) {
  if (outPath.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(outPath);
  if (!out) throw std::runtime_error("cannot write " + outPath);
  out << text;
}

std::vector<double> parseList(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad list entry '" + item + "'");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted recursive tree simulator and verification lab"};
  app.require_subcommand(1);

  std::string lawText, outPath, windowText = "-5:5", modeText = "fixed";
  double n = 0;
  std::size_t replicates = 1;
  std::optional<std::uint64_t> seed;
  int parallel = 0;

  auto* sim = app.add_subcommand("simulate", "grow replicate trees and append census records (JSONL)");
  std::string dumpTree;
  sim->add_option("--law", lawText, "weight law: JSON or preset (" + wrt::WeightLaw::presetNames() + ")")->required();
  sim->add_option("--n", n, "vertices per tree")->required();
  sim->add_option("--mode", modeText, "fixed | random-out")->check(CLI::IsMember({"fixed", "random-out"}));
  sim->add_option("--seed", seed, "run seed (falls back to WRTLAB_SEED)");
  sim->add_option("--replicates", replicates, "number of trees");
  sim->add_option("--window", windowText, "census window iLo:iHi");
  sim->add_option("--out", outPath, "record file")->required();
  sim->add_option("--parallel", parallel, "worker threads (0 = all cores)");
  sim->add_option("--dump-tree", dumpTree, "write replicate 0 as a child,parent CSV");

  auto* ver = app.add_subcommand("verify", "check census records against the limit predictions");
  std::string recordsPath;
  ver->add_option("records", recordsPath, "record file")->required();
  ver->add_option("--out", outPath, "JSON report path");
  ver->add_option("--parallel", parallel, "ignored");

  auto* pred = app.add_subcommand("predict", "centering sequence and limit constants");
  pred->add_option("--law", lawText, "weight law, or {\"kind\":\"rav\",...} for prediction only")->required();
  pred->add_option("--n", n, "tree size")->required();
  pred->add_option("--out", outPath, "output path");

  auto* tab = app.add_subcommand("table", "degree distribution table (CSV)");
  std::string kRange = "0:50";
  double xi = 0.05;
  tab->add_option("--law", lawText, "weight law")->required();
  tab->add_option("--k", kRange, "range kLo:kHi");
  tab->add_option("--xi", xi, "lower-bound slack");
  tab->add_option("--out", outPath, "output path");

  auto* orc = app.add_subcommand("oracle", "exact degree laws (JSON)");
  std::string weightsText, targetsText;
  std::size_t vertex = 0, cap = 0;
  orc->add_option("--weights", weightsText, "fixed weights w1,w2,...");
  orc->add_option("--targets", targetsText, "target vertices (default: all)");
  orc->add_option("--law", lawText, "weight law for the weight-averaged law");
  orc->add_option("--n", n, "tree size");
  orc->add_option("--vertex", vertex, "vertex j (0 = uniform vertex)");
  orc->add_option("--replicates", replicates, "weight replicates");
  orc->add_option("--seed", seed, "seed (falls back to WRTLAB_SEED)");
  orc->add_option("--cap", cap, "lump degrees >= cap");
  orc->add_option("--parallel", parallel, "worker threads (0 = all cores)");
  orc->add_option("--out", outPath, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sim) {
      wrt::ExperimentConfig cfg;
      cfg.plan.law = wrt::WeightLaw::parse(lawText);
      if (n < 1 || n != static_cast<double>(static_cast<std::size_t>(n)))
        throw std::invalid_argument("--n must be a positive integer");
      cfg.plan.n = static_cast<std::size_t>(n);
      cfg.plan.mode = wrt::parseAttachMode(modeText);
      cfg.plan.seed = resolveSeed(seed);
      cfg.plan.window = wrt::parseWindow(windowText);
      cfg.replicates = replicates;
      cfg.out = outPath;
      cfg.parallel = parallel;
      if (!dumpTree.empty()) cfg.treeDump = dumpTree;
      const auto written = wrt::runSimulate(cfg);
      std::cerr << "wrote " << written << " records to " << outPath << '\n';
      return kExitOk;
    }
    if (*ver) {
      const auto report = wrt::runVerify(recordsPath);
      std::cout << report.table();
      if (!outPath.empty()) emit(report.toJson().dump(2) + "\n", outPath);
      return report.hardFailure() ? kExitVerifyFailed : kExitOk;
    }
    if (*pred) {
      nlohmann::json j;
      const auto parsed = nlohmann::json::parse(lawText, nullptr, false);
      if (!parsed.is_discarded() && parsed.is_object() && parsed.value("kind", "") == "rav") {
        wrt::RavParams p;
        p.tau = parsed.at("tau").get<double>();
        p.c1 = parsed.at("c1").get<double>();
        p.b = parsed.value("b", 0.0);
        p.theta = parsed.at("theta").get<double>();
        j = wrt::predictJson(wrt::centeringForRaV(p), n);
        j["law"] = parsed;
        j["n"] = n;
      } else {
        j = wrt::runPredict(wrt::WeightLaw::parse(lawText), n);
      }
      emit(j.dump(2) + "\n", outPath);
      return kExitOk;
    }
    if (*tab) {
      const auto range = wrt::parseWindow(kRange);
      emit(wrt::runTable(wrt::WeightLaw::parse(lawText), range.lo, range.hi, xi), outPath);
      return kExitOk;
    }
    if (*orc) {
      nlohmann::json j;
      if (!weightsText.empty()) {
        const auto w = parseList(weightsText);
        std::vector<wrt::Vertex> targets;
        if (targetsText.empty())
          for (std::size_t v = 1; v <= w.size(); ++v) targets.push_back(static_cast<wrt::Vertex>(v));
        else
          for (double t : parseList(targetsText)) targets.push_back(static_cast<wrt::Vertex>(t));
        if (w.size() <= wrt::kMaxEnumerationSize) {
          j = wrt::enumerateExact(w, targets).toJson();
          j["method"] = "enumeration";
        } else {
          j["method"] = "poisson-binomial";
          for (auto t : targets) j["marginals"][std::to_string(t)] = wrt::poissonBinomialMarginal(w, t, cap);
        }
        j["weights"] = w;
      } else if (!lawText.empty()) {
        if (n < 1) throw std::invalid_argument("--n is required with --law");
        if (parallel > 0) omp_set_num_threads(parallel);
        wrt::OracleOptions opt;
        opt.replicates = replicates < 2 ? 1000 : replicates;
        opt.seed = resolveSeed(seed);
        opt.cap = cap;
        const auto law = wrt::WeightLaw::parse(lawText);
        const auto size = static_cast<std::size_t>(n);
        const auto result = vertex == 0 ? wrt::uniformVertexDegreeLaw(law, size, opt)
                                        : wrt::unconditionalDegreeLaw(law, size, static_cast<wrt::Vertex>(vertex), opt);
        j = result.toJson();
        j["law"] = law.toJson();
        j["n"] = size;
        j["vertex"] = vertex;
      } else {
        throw std::invalid_argument("oracle needs --weights or --law");
      }
      emit(j.dump(2) + "\n", outPath);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
