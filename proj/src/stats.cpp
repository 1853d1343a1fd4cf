#include "wrt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace wrt {

Window parseWindow(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("window must look like iLo:iHi, got '" + text + "'");
  Window w;
  try {
    std::size_t used = 0;
    const std::string lo = text.substr(0, colon), hi = text.substr(colon + 1);
    w.lo = std::stoi(lo, &used);
    if (used != lo.size()) throw std::invalid_argument("trailing characters");
    w.hi = std::stoi(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("window must look like iLo:iHi, got '" + text + "'");
  }
  if (w.lo > w.hi) throw std::invalid_argument("empty window '" + text + "'");
  return w;
}

nlohmann::json DegreeCensus::toJson() const {
  return {{"floor_center", floorCenter}, {"eps", eps},
          {"window", {window.lo, window.hi}}, {"xi", xi},
          {"x_geq", xGeq}, {"max_degree", maxDegree},
          {"num_maximizers", numMaximizers}};
}

DegreeCensus DegreeCensus::fromJson(const nlohmann::json& j) {
  DegreeCensus c;
  c.floorCenter = j.at("floor_center").get<std::int64_t>();
  c.eps = j.at("eps").get<double>();
  c.window = {j.at("window").at(0).get<int>(), j.at("window").at(1).get<int>()};
  c.xi = j.at("xi").get<std::vector<std::int64_t>>();
  c.xGeq = j.at("x_geq").get<std::vector<std::int64_t>>();
  c.maxDegree = j.at("max_degree").get<std::uint32_t>();
  c.numMaximizers = j.at("num_maximizers").get<std::int64_t>();
  const auto width = static_cast<std::size_t>(c.window.hi - c.window.lo + 1);
  if (c.window.lo > c.window.hi || c.xi.size() != width || c.xGeq.size() != width)
    throw std::invalid_argument("census window does not match bucket arrays");
  return c;
}

DegreeCensus census(std::span<const std::uint32_t> inDegrees, const Centering& centering, Window window) {
  if (window.lo > window.hi) throw std::invalid_argument("census window is empty");
  const double n = static_cast<double>(inDegrees.size());
  DegreeCensus c;
  c.floorCenter = centering.floorCenter(n);
  c.eps = centering.epsN(n);
  c.window = window;
  const auto width = static_cast<std::size_t>(window.hi - window.lo + 1);
  c.xi.assign(width, 0);
  c.xGeq.assign(width, 0);

  // Degrees above the window are counted once and added to every tail cell.
  std::int64_t above = 0;
  for (std::uint32_t d : inDegrees) {
    if (d > c.maxDegree) {
      c.maxDegree = d;
      c.numMaximizers = 1;
    } else if (d == c.maxDegree) {
      ++c.numMaximizers;
    }
    const std::int64_t bucket = static_cast<std::int64_t>(d) - c.floorCenter;
    if (bucket > window.hi)
      ++above;
    else if (bucket >= window.lo)
      ++c.xi[static_cast<std::size_t>(bucket - window.lo)];
  }
  std::int64_t running = above;
  for (std::size_t k = width; k-- > 0;) {
    running += c.xi[k];
    c.xGeq[k] = running;
  }
  return c;
}

DegreeCensus census(const Wrt& tree, const Centering& centering, Window window) {
  return census(tree.inDegrees, centering, window);
}

std::int64_t fallingFactorial(std::int64_t x, int a) {
  if (x < 0 || a < 0) throw std::invalid_argument("fallingFactorial requires x, a >= 0");
  std::int64_t out = 1;
  for (int k = 0; k < a; ++k) {
    if (x - k <= 0) return 0;
    out *= x - k;
  }
  return out;
}

MeanEstimate meanEstimate(std::span<const double> values) {
  const auto count = values.size();
  if (count < 2) throw std::invalid_argument("need at least two samples");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (count - 1) / count)};
}

MomentEstimate factorialMomentEstimate(std::span<const DegreeCensus> samples, const FactorialOrders& orders) {
  if (samples.size() < 2) throw std::invalid_argument("factorial moments need at least two replicates");
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& s : samples) {
    double prod = 1.0;
    for (const auto& [i, a] : orders.exact) {
      if (!s.contains(i)) throw std::invalid_argument("bucket " + std::to_string(i) + " outside census window");
      prod *= static_cast<double>(fallingFactorial(s.x(i), a));
    }
    if (orders.tail) {
      const auto [i, a] = *orders.tail;
      if (!s.contains(i)) throw std::invalid_argument("bucket " + std::to_string(i) + " outside census window");
      prod *= static_cast<double>(fallingFactorial(s.geq(i), a));
    }
    values.push_back(prod);
  }
  const auto m = meanEstimate(values);
  return {m.mean, m.stdError, static_cast<std::int64_t>(samples.size())};
}

double poissonPmf(double mean, std::int64_t k) {
  if (k < 0) return 0.0;
  return std::exp(k * std::log(mean) - mean - boost::math::lgamma(k + 1.0));
}

FitReport poissonFit(std::span<const std::int64_t> samples, double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("poissonFit requires mean > 0");
  if (samples.size() < 500) throw std::invalid_argument("poissonFit requires at least 500 samples");
  const auto total = static_cast<double>(samples.size());
  std::int64_t maxSample = 0;
  for (auto s : samples) {
    if (s < 0) throw std::invalid_argument("poissonFit: negative sample");
    maxSample = std::max(maxSample, s);
  }
  std::vector<double> observed(static_cast<std::size_t>(maxSample) + 1, 0.0);
  for (auto s : samples) observed[static_cast<std::size_t>(s)] += 1.0;

  // Support considered explicitly: every observed value plus the bulk of the
  // Poisson law; the remainder is a single tail cell.
  std::int64_t kMax = maxSample;
  while (kMax < mean || boost::math::gamma_p(kMax + 1.0, mean) > 1e-14) ++kMax;
  observed.resize(static_cast<std::size_t>(kMax) + 1, 0.0);

  FitReport r;
  double pmfSum = 0.0;
  for (std::int64_t k = 0; k <= kMax; ++k) {
    const double p = poissonPmf(mean, k);
    pmfSum += p;
    r.tvDistance += std::abs(observed[static_cast<std::size_t>(k)] / total - p);
  }
  r.tvDistance = 0.5 * (r.tvDistance + std::max(0.0, 1.0 - pmfSum));

  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double o = 0.0, e = 0.0;
  for (std::int64_t k = 0; k <= kMax; ++k) {
    o += observed[static_cast<std::size_t>(k)];
    e += total * poissonPmf(mean, k);
    if (e >= 5.0) {
      cells.emplace_back(o, e);
      o = e = 0.0;
    }
  }
  e += total * boost::math::gamma_p(kMax + 1.0, mean);
  if (!cells.empty()) {
    cells.back().first += o;
    cells.back().second += e;
  } else {
    cells.emplace_back(o, e);
  }
  for (const auto& [obs, ex] : cells) r.chiSq += (obs - ex) * (obs - ex) / ex;
  r.dof = static_cast<int>(cells.size()) - 1;
  r.chiSqPValue = r.dof > 0 ? boost::math::gamma_q(r.dof / 2.0, r.chiSq / 2.0) : 1.0;
  return r;
}

NormalityReport normalityCheck(std::span<const double> samples, double predictedMean, double predictedSd) {
  if (!(predictedSd > 0.0)) throw std::invalid_argument("normalityCheck requires sd > 0");
  if (samples.empty()) throw std::invalid_argument("normalityCheck requires samples");
  std::vector<double> z(samples.begin(), samples.end());
  for (auto& v : z) v = (v - predictedMean) / predictedSd;
  std::sort(z.begin(), z.end());

  const boost::math::normal_distribution<double> phi;
  const auto count = static_cast<double>(z.size());
  NormalityReport r;
  // Tied values are handled as one jump of the empirical CDF.
  for (std::size_t i = 0; i < z.size();) {
    std::size_t j = i;
    while (j < z.size() && z[j] == z[i]) ++j;
    const double f = boost::math::cdf(phi, z[i]);
    r.ksStat = std::max({r.ksStat, std::abs(f - i / count), std::abs(j / count - f)});
    i = j;
  }

  const double m = std::accumulate(samples.begin(), samples.end(), 0.0) / count;
  double m2 = 0.0, m3 = 0.0;
  for (double v : samples) {
    m2 += (v - m) * (v - m);
    m3 += (v - m) * (v - m) * (v - m);
  }
  m2 /= count;
  m3 /= count;
  r.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  r.standardizedSkew = r.skewness / std::sqrt(6.0 / count);
  return r;
}

std::string bucketSummaryCsv(std::span<const DegreeCensus> samples, const Centering& centering, double n) {
  if (samples.empty()) throw std::invalid_argument("no census samples");
  Window w = samples.front().window;
  for (const auto& s : samples) {
    w.lo = std::max(w.lo, s.window.lo);
    w.hi = std::min(w.hi, s.window.hi);
  }
  std::ostringstream os;
  os.precision(12);
  os << "i,mean_xi,stderr,predicted_mean\n";
  std::vector<double> values(samples.size());
  for (int i = w.lo; i <= w.hi; ++i) {
    for (std::size_t r = 0; r < samples.size(); ++r) values[r] = static_cast<double>(samples[r].x(i));
    const auto m = samples.size() >= 2 ? meanEstimate(values) : MeanEstimate{values.front(), 0.0};
    os << i << ',' << m.mean << ',' << m.stdError << ',';
    if (centering.hasIntensity)
      os << bucketMeans(centering, n, i).meanXi;
    os << '\n';
  }
  return os.str();
}

}  // namespace wrt
