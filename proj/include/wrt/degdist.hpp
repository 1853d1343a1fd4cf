#pragma once

#include <optional>
#include <utility>

#include "wrt/weights.hpp"

namespace wrt {

enum class TailMethod { Quadrature, ClosedForm, Asymptotic };

struct DegreeTailValue {
  int k = 0;
  double pk = 0.0;
  double pgeq = 0.0;
  TailMethod method = TailMethod::Quadrature;
};

/// Limiting probability that a uniform vertex has in-degree exactly k:
///   E[(theta-1)/(theta-1+W) * (W/(theta-1+W))^k].
/// Atoms are summed exactly, the continuous part by quadrature.
double pkQuadrature(const WeightLaw& law, int k);

/// The part of pkQuadrature carried by weights strictly below one. Lets
/// callers measure the distance to the atom-at-one term without cancellation.
double pkBelowOne(const WeightLaw& law, int k);

/// Limiting probability of in-degree at least k: E[(W/(theta-1+W))^k].
double pgeqQuadrature(const WeightLaw& law, int k);

DegreeTailValue degreeTail(const WeightLaw& law, int k);

/// Beta(alpha, beta) weights: exact values through the Gauss series at 1/theta.
double pkBetaClosedForm(double alpha, double beta, int k);
double pgeqBetaClosedForm(double alpha, double beta, int k);

/// Leading large-k term Gamma(a+b)/Gamma(a) (1-1/theta)^{1-b} k^{-b} theta^{-k}.
double pkBetaLeading(double alpha, double beta, int k);

/// Gamma-fraction weights: C k^{b/2+1/4} exp(-2 sqrt((1-1/theta) k / c1)) theta^{-k},
/// times (1-1/theta) for pk.
double pkGammaFractionAsymptotic(double b, double c1, int k);
double pgeqGammaFractionAsymptotic(double b, double c1, int k);
/// The constant C in the expression above.
double gammaFractionTailConst(double b, double c1);

/// Exponent -tau^g/(1-g) ((1-1/theta) k / c1)^{1-g}, g = 1/(tau+1), of the
/// sub-geometric correction in the regularly varying Gumbel case.
double gumbelRvExponent(double tau, double c1, double theta, double k);

/// Exponent of the sub-geometric correction in the rapidly varying Gumbel case:
/// -(log k / c1)^tau (1 - tau(tau-1) loglog k / log k + K / log k),
/// K = tau log(e c1^tau (1-1/theta) / tau).
double gumbelRavExponent(double tau, double c1, double theta, double k);

/// Leading-order pk by maximum-domain class. Atom: q0(1-1/theta)theta^{-k};
/// Beta: the exact closed form; gamma fraction: the sharp asymptotic above.
/// Throws std::invalid_argument for laws outside these classes.
double pkAsymptotic(const WeightLaw& law, int k);

/// ((theta+xi)^{-k}, theta^{-k}).
std::pair<double, double> pkBounds(const WeightLaw& law, int k, double xi);

/// Smallest K <= kMax such that pkQuadrature(k) >= (theta+xi)^{-k} for every
/// k in [K, kMax]. Empty when the bound already fails at kMax.
std::optional<int> lowerBoundThreshold(const WeightLaw& law, double xi, int kMax);

}  // namespace wrt
