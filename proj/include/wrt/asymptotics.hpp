#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "wrt/weights.hpp"

namespace wrt {

enum class CenteringCase { Atom, BetaWeibull, GammaFractionGumbel, RaV };

std::string toString(CenteringCase c);

/// Parameters of a rapidly varying Gumbel-class law, which has no sampler in
/// the catalog and is only used for predictions.
struct RavParams {
  double tau = 2.0;
  double c1 = 1.0;
  double b = 0.0;
  double theta = 1.5;
};

/// Case-dependent centering sequence c(n) for the maximum degree.
struct Centering {
  CenteringCase tag = CenteringCase::Atom;
  double theta = 2.0;
  /// Constant multiplying theta^{-x} log(theta) in the limiting intensity.
  /// Meaningless (zero) for the RaV case.
  double intensityConst = 1.0;
  bool hasIntensity = true;

  double beta = 0.0;     // BetaWeibull: second-order coefficient
  double cTheta = 0.0;   // GammaFractionGumbel: C_{theta,1,c1}
  double logCoef = 0.0;  // GammaFractionGumbel: b/2 + 1/4
  double tau = 1.0;      // RaV
  double c1Const = 0.0, c2Const = 0.0, c3Const = 0.0;  // RaV

  double logTheta(double x) const;
  /// Pre-floor centering.
  double cOfN(double n) const;
  /// Fractional part of c(n) in [0,1). Values within 1e-12 of an integer are
  /// snapped to it.
  double epsN(double n) const;
  std::int64_t floorCenter(double n) const;
  /// Named additive terms of c(n).
  nlohmann::json terms(double n) const;
};

/// Throws std::invalid_argument for laws without mass near one.
Centering centeringFor(const WeightLaw& law);
Centering centeringForRaV(const RavParams& p);

/// C_{theta,tau,c1} = tau^g / ((1-g) log theta) ((1-1/theta)/c1)^{1-g}, g = 1/(tau+1).
double gumbelSecondOrderConst(double theta, double tau, double c1);

struct BucketMeans {
  double meanXi = 0.0;
  double meanXgeq = 0.0;
};

BucketMeans bucketMeans(const Centering& c, double n, int i);

/// P(max degree >= floor(c(n)) + i) in the limit, with drift rate delta.
double maxTailPrediction(const Centering& c, double n, int i, double delta = 0.0);

/// Limiting probability that exactly k vertices attain the maximum degree,
/// along a subsequence with fractional part eps. The lattice sum over j is
/// truncated once terms drop below 1e-15 on both sides of the peak.
double maximizerCountPmf(const Centering& c, double eps, int k);

struct SkRk {
  double k = 1.0;
  double sk = 0.0;
  double rk = 1.0;
  /// log r_k, finite even where r_k underflows.
  double logRk = 0.0;
};

SkRk skRk(const WeightLaw& law, double k);

/// In-probability limit of the normalized maximum degree.
/// Beta: -beta; gamma fraction: -C_{theta,1,c1}; RaV: C3. Throws for atoms.
double secondOrderLimit(const WeightLaw& law);
double secondOrderLimit(const Centering& c);

}  // namespace wrt
