#include "wrt/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wrt/degdist.hpp"
#include "wrt/specfun.hpp"

namespace wrt {

std::string toString(CenteringCase c) {
  switch (c) {
    case CenteringCase::Atom: return "atom";
    case CenteringCase::BetaWeibull: return "beta-weibull";
    case CenteringCase::GammaFractionGumbel: return "gamma-fraction-gumbel";
    case CenteringCase::RaV: return "gumbel-rav";
  }
  return "unknown";
}

double Centering::logTheta(double x) const { return std::log(x) / std::log(theta); }

namespace {

// log_theta log_theta n, with the inner logarithm clamped at one so small n
// stay finite.
double iteratedLog(const Centering& c, double n) { return c.logTheta(std::max(c.logTheta(n), 1.0)); }

}  // namespace

double Centering::cOfN(double n) const {
  if (!(n >= 1.0)) throw std::invalid_argument("centering requires n >= 1");
  const double l = logTheta(n);
  switch (tag) {
    case CenteringCase::Atom: return l;
    case CenteringCase::BetaWeibull: return l - beta * iteratedLog(*this, n);
    case CenteringCase::GammaFractionGumbel: return l - cTheta * std::sqrt(l) + logCoef * iteratedLog(*this, n);
    case CenteringCase::RaV: {
      const double ll = iteratedLog(*this, n);
      const double lll = logTheta(std::max(ll, 1.0));
      return l - c1Const * std::pow(ll, tau) + c2Const * std::pow(ll, tau - 1.0) * lll +
             c3Const * std::pow(ll, tau - 1.0);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

double snapped(double c) {
  const double r = std::round(c);
  return std::abs(c - r) <= 1e-12 * std::max(1.0, std::abs(c)) ? r : c;
}

}  // namespace

double Centering::epsN(double n) const {
  const double c = snapped(cOfN(n));
  return c - std::floor(c);
}

std::int64_t Centering::floorCenter(double n) const {
  return static_cast<std::int64_t>(std::floor(snapped(cOfN(n))));
}

nlohmann::json Centering::terms(double n) const {
  const double l = logTheta(n);
  nlohmann::json t = {{"log_theta_n", l}};
  switch (tag) {
    case CenteringCase::Atom: break;
    case CenteringCase::BetaWeibull: t["second_order"] = -beta * iteratedLog(*this, n); break;
    case CenteringCase::GammaFractionGumbel:
      t["second_order"] = -cTheta * std::sqrt(l);
      t["third_order"] = logCoef * iteratedLog(*this, n);
      t["C_theta"] = cTheta;
      t["C"] = intensityConst * std::pow(theta, -cTheta * cTheta / 2.0);
      break;
    case CenteringCase::RaV: {
      const double ll = iteratedLog(*this, n);
      t["second_order"] = -c1Const * std::pow(ll, tau);
      t["third_order"] = c2Const * std::pow(ll, tau - 1.0) * logTheta(std::max(ll, 1.0));
      t["fourth_order"] = c3Const * std::pow(ll, tau - 1.0);
      t["C1"] = c1Const;
      t["C2"] = c2Const;
      t["C3"] = c3Const;
      break;
    }
  }
  t["c_n"] = cOfN(n);
  t["floor_c_n"] = floorCenter(n);
  return t;
}

double gumbelSecondOrderConst(double theta, double tau, double c1) {
  const double g = 1.0 / (tau + 1.0);
  return std::pow(tau, g) / ((1.0 - g) * std::log(theta)) * std::pow((1.0 - 1.0 / theta) / c1, 1.0 - g);
}

Centering centeringFor(const WeightLaw& law) {
  Centering c;
  c.theta = law.theta();
  const double g = 1.0 - 1.0 / c.theta;
  const auto tag = law.mdaClass();
  if (const auto* a = std::get_if<AtomTag>(&tag)) {
    c.tag = CenteringCase::Atom;
    c.intensityConst = a->q0;
  } else if (const auto* b = std::get_if<BetaLaw>(&law.variant())) {
    c.tag = CenteringCase::BetaWeibull;
    c.beta = b->beta;
    c.intensityConst =
        std::exp(specfun::logGamma(b->alpha + b->beta) - specfun::logGamma(b->alpha) - b->beta * std::log(g));
  } else if (const auto* gf = std::get_if<GammaFractionLaw>(&law.variant())) {
    c.tag = CenteringCase::GammaFractionGumbel;
    c.cTheta = gumbelSecondOrderConst(c.theta, 1.0, gf->c1);
    c.logCoef = gf->b / 2.0 + 0.25;
    c.intensityConst = gammaFractionTailConst(gf->b, gf->c1) * std::pow(c.theta, c.cTheta * c.cTheta / 2.0);
  } else {
    throw std::invalid_argument("no centering for law " + law.describe());
  }
  return c;
}

Centering centeringForRaV(const RavParams& p) {
  if (!(p.theta > 1.0 && p.theta <= 2.0) || !(p.c1 > 0.0) || !(p.tau > 0.0))
    throw std::invalid_argument("RaV parameters require theta in (1,2], c1 > 0, tau > 0");
  Centering c;
  c.tag = CenteringCase::RaV;
  c.theta = p.theta;
  c.tau = p.tau;
  c.hasIntensity = false;
  c.intensityConst = 0.0;
  const double lt = std::log(p.theta);
  const double ct = std::pow(p.c1, -p.tau);
  c.c1Const = std::pow(lt, p.tau - 1.0) * ct;
  c.c2Const = c.c1Const * p.tau * (p.tau - 1.0);
  c.c3Const = (std::log(lt) * (p.tau - 1.0) -
               std::log(std::numbers::e * std::pow(p.c1, p.tau) * (1.0 - 1.0 / p.theta) / p.tau)) *
              std::pow(lt, p.tau - 2.0) * p.tau * ct;
  return c;
}

namespace {

void requireIntensity(const Centering& c) {
  if (!c.hasIntensity) throw std::invalid_argument("no Poisson intensity for the " + toString(c.tag) + " case");
}

}  // namespace

BucketMeans bucketMeans(const Centering& c, double n, int i) {
  requireIntensity(c);
  const double geq = c.intensityConst * std::pow(c.theta, -i + c.epsN(n));
  return {(1.0 - 1.0 / c.theta) * geq, geq};
}

double maxTailPrediction(const Centering& c, double n, int i, double delta) {
  requireIntensity(c);
  if (delta < 0.0) throw std::invalid_argument("delta must be nonnegative");
  double adjust = 1.0;
  switch (c.tag) {
    case CenteringCase::Atom:
      if (delta != 0.0) throw std::invalid_argument("atom case has no drift adjustment");
      break;
    case CenteringCase::BetaWeibull: adjust = std::pow(1.0 + delta, -c.beta); break;
    case CenteringCase::GammaFractionGumbel: adjust = std::pow(c.theta, -delta * c.cTheta / 2.0); break;
    case CenteringCase::RaV: break;
  }
  return -std::expm1(-c.intensityConst * adjust * std::pow(c.theta, -i + c.epsN(n)));
}

double maximizerCountPmf(const Centering& c, double eps, int k) {
  requireIntensity(c);
  if (k < 1) throw std::invalid_argument("maximizer count is at least one");
  const double lt = std::log(c.theta);
  const double logG = std::log1p(-1.0 / c.theta);
  const double logI = std::log(c.intensityConst);
  const double logKFact = specfun::logGamma(k + 1.0);
  auto term = [&](long j) {
    const double logLambda = logI + (-static_cast<double>(j) + eps) * lt;
    return std::exp(k * (logG + logLambda) - std::exp(logLambda) - logKFact);
  };
  // Terms peak where lambda_j is close to k / (1 - 1/theta).
  const long peak = std::lround(eps + (logI - std::log(k) + logG) / lt);
  constexpr double kThreshold = 1e-15;
  constexpr long kMaxSteps = 100000;
  const double top = term(peak);
  double sum = top;
  for (int dir : {-1, 1}) {
    double prev = top;
    for (long step = 1; step < kMaxSteps; ++step) {
      const double t = term(peak + dir * step);
      sum += t;
      if (t < kThreshold && t <= prev) break;
      prev = t;
    }
  }
  return sum;
}

SkRk skRk(const WeightLaw& law, double k) {
  if (!(k >= 1.0)) throw std::invalid_argument("k must be at least 1");
  const double g = 1.0 - 1.0 / law.theta();
  const double atom = law.atomAtOne();
  auto gap = [&](double x) { return (law.tail(x) - atom) - std::exp(-g * (1.0 - x) * k); };
  double s = 0.0;
  if (gap(0.0) > 0.0) {
    double lo = 0.0, hi = 1.0 - 1e-15;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (gap(mid) <= 0.0)
        hi = mid;
      else
        lo = mid;
    }
    s = hi;
  }
  const double logR = -g * (1.0 - s) * k;
  return {k, s, std::exp(logR), logR};
}

double secondOrderLimit(const Centering& c) {
  switch (c.tag) {
    case CenteringCase::Atom:
      throw std::invalid_argument("atom case has a random, not deterministic, second-order limit");
    case CenteringCase::BetaWeibull: return -c.beta;
    case CenteringCase::GammaFractionGumbel: return -c.cTheta;
    case CenteringCase::RaV: return c.c3Const;
  }
  throw std::logic_error("unreachable");
}

double secondOrderLimit(const WeightLaw& law) { return secondOrderLimit(centeringFor(law)); }

}  // namespace wrt
