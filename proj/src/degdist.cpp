#include "wrt/degdist.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"
#include "wrt/specfun.hpp"

namespace wrt {

namespace {

// (theta W / (theta-1+W))^k, evaluated from 1-W so that weights close to
// one keep full precision. The factor theta^{-k} is applied by the caller.
double scaledPower(double x, double oneMinusX, double c, int k) {
  if (k == 0) return 1.0;
  const double shrink = c * oneMinusX / (c + x);
  if (k <= 50) return std::pow(1.0 - shrink, k);
  return std::exp(k * std::log1p(-shrink));
}

// E[g(W)] with g(x, 1-x) over atoms and the continuous part.
template <class G>
double expectation(const WeightLaw& law, G&& g, bool skipAtOne = false) {
  double sum = 0.0;
  for (const auto& [w, mass] : law.atoms())
    if (!(skipAtOne && w == 1.0)) sum += mass * g(w, 1.0 - w);
  if (law.continuousMass() > 0.0)
    sum += detail::integrateUnit(
        [&](double x, double y) {
          const double d = law.continuousDensity(x, y);
          return d > 0.0 ? d * g(x, y) : 0.0;
        },
        1e-12);
  return sum;
}

double betaGammaRatio(double alpha, double beta, int k) {
  using specfun::logGamma;
  return logGamma(alpha + beta) + logGamma(k + alpha) - logGamma(alpha) - logGamma(k + alpha + beta);
}

double seriesValue(double a, double b, double c, double z) {
  const auto s = specfun::gauss2F1(a, b, c, z);
  if (!s.converged) throw std::runtime_error("hypergeometric series did not converge");
  return s.value;
}

double thetaOfBeta(double alpha, double beta) {
  if (!(alpha > 0.0 && beta > 0.0)) throw std::invalid_argument("beta parameters must be positive");
  return 1.0 + alpha / (alpha + beta);
}

}  // namespace

double pkQuadrature(const WeightLaw& law, int k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  const double theta = law.theta();
  const double c = theta - 1.0;
  const double integral =
      expectation(law, [&](double x, double y) { return c / (c + x) * scaledPower(x, y, c, k); });
  return integral * std::pow(theta, -k);
}

double pkBelowOne(const WeightLaw& law, int k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  const double theta = law.theta();
  const double c = theta - 1.0;
  const double integral =
      expectation(law, [&](double x, double y) { return c / (c + x) * scaledPower(x, y, c, k); }, true);
  return integral * std::pow(theta, -k);
}

double pgeqQuadrature(const WeightLaw& law, int k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (k == 0) return 1.0;
  const double theta = law.theta();
  const double c = theta - 1.0;
  const double integral = expectation(law, [&](double x, double y) { return scaledPower(x, y, c, k); });
  return integral * std::pow(theta, -k);
}

DegreeTailValue degreeTail(const WeightLaw& law, int k) {
  return {k, pkQuadrature(law, k), pgeqQuadrature(law, k), TailMethod::Quadrature};
}

double pkBetaClosedForm(double alpha, double beta, int k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  const double theta = thetaOfBeta(alpha, beta);
  const double z = 1.0 / theta;
  const double f = seriesValue(beta, k + 1.0, k + alpha + beta, z);
  return std::exp(betaGammaRatio(alpha, beta, k) - k * std::log(theta)) * (1.0 - z) * f;
}

double pgeqBetaClosedForm(double alpha, double beta, int k) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  if (k == 0) return 1.0;
  const double theta = thetaOfBeta(alpha, beta);
  const double f = seriesValue(beta, k, k + alpha + beta, 1.0 / theta);
  return std::exp(betaGammaRatio(alpha, beta, k) - k * std::log(theta)) * f;
}

double pkBetaLeading(double alpha, double beta, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const double theta = thetaOfBeta(alpha, beta);
  const double logValue = specfun::logGamma(alpha + beta) - specfun::logGamma(alpha) +
                          (1.0 - beta) * std::log1p(-1.0 / theta) - beta * std::log(k) -
                          k * std::log(theta);
  return std::exp(logValue);
}

double gammaFractionTailConst(double b, double c1) {
  const double theta = WeightLaw::gammaFraction(b, c1).theta();
  const double g = 1.0 - 1.0 / theta;
  return std::exp(g / (2.0 * c1)) * std::sqrt(std::numbers::pi) * std::pow(c1, -0.25 + b / 2.0) *
         std::pow(g, 0.25 + b / 2.0);
}

double pgeqGammaFractionAsymptotic(double b, double c1, int k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const double theta = WeightLaw::gammaFraction(b, c1).theta();
  const double g = 1.0 - 1.0 / theta;
  const double logValue = std::log(gammaFractionTailConst(b, c1)) + (b / 2.0 + 0.25) * std::log(k) -
                          2.0 * std::sqrt(g * k / c1) - k * std::log(theta);
  return std::exp(logValue);
}

double pkGammaFractionAsymptotic(double b, double c1, int k) {
  const double theta = WeightLaw::gammaFraction(b, c1).theta();
  return (1.0 - 1.0 / theta) * pgeqGammaFractionAsymptotic(b, c1, k);
}

double gumbelRvExponent(double tau, double c1, double theta, double k) {
  const double gamma = 1.0 / (tau + 1.0);
  return -std::pow(tau, gamma) / (1.0 - gamma) * std::pow((1.0 - 1.0 / theta) * k / c1, 1.0 - gamma);
}

double gumbelRavExponent(double tau, double c1, double theta, double k) {
  const double logK = std::log(k);
  const double kConst = tau * std::log(std::numbers::e * std::pow(c1, tau) * (1.0 - 1.0 / theta) / tau);
  return -std::pow(logK / c1, tau) * (1.0 - tau * (tau - 1.0) * std::log(logK) / logK + kConst / logK);
}

double pkAsymptotic(const WeightLaw& law, int k) {
  const double theta = law.theta();
  const auto& v = law.variant();
  if (const auto* b = std::get_if<BetaLaw>(&v)) return pkBetaClosedForm(b->alpha, b->beta, k);
  if (const auto* g = std::get_if<GammaFractionLaw>(&v)) return pkGammaFractionAsymptotic(g->b, g->c1, k);
  const auto tag = law.mdaClass();
  if (const auto* a = std::get_if<AtomTag>(&tag))
    return a->q0 * (1.0 - 1.0 / theta) * std::pow(theta, -k);
  throw std::invalid_argument("no asymptotic form for law " + law.describe());
}

std::pair<double, double> pkBounds(const WeightLaw& law, int k, double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("xi must be positive");
  const double theta = law.theta();
  return {std::pow(theta + xi, -k), std::pow(theta, -k)};
}

std::optional<int> lowerBoundThreshold(const WeightLaw& law, double xi, int kMax) {
  std::optional<int> threshold;
  for (int k = kMax; k >= 0; --k) {
    if (pkQuadrature(law, k) < pkBounds(law, k, xi).first) break;
    threshold = k;
  }
  return threshold;
}

}  // namespace wrt
