#pragma once

namespace wrt::specfun {

struct SeriesResult {
  double value = 0.0;
  int terms = 0;
  bool converged = false;
};

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double logGamma(double x);

/// Gauss hypergeometric series 2F1(a,b;c;z) for |z| < 1, summed until the
/// relative term size drops below 1e-16 (at most 1e5 terms). Callers map
/// arguments into the unit disc themselves.
SeriesResult gauss2F1(double a, double b, double c, double z);

/// Confluent hypergeometric function of the second kind, by quadrature of
///   U(a,b,z) = 1/Gamma(a) * int_0^inf x^{a-1} (1+x)^{b-a-1} e^{-zx} dx,
/// valid for a > 0, z > 0.
double hypU(double a, double b, double z);

/// Large-a asymptotic form of U(a,b,z) obtained from the Bessel-K expansion;
/// relative error O(1/sqrt(a)). Requires a > b/2 and z > 0.
double hypUAsymptotic(double a, double b, double z);

}  // namespace wrt::specfun
