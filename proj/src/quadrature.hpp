#pragma once

// Thin wrappers over Boost.Math tanh-sinh quadrature. Integrands on [0,1]
// receive both x and 1-x so that mass concentrated at the upper endpoint is
// resolved without cancellation.

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace wrt::detail {

inline boost::math::quadrature::tanh_sinh<double>& tanhSinh() {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(18);
  return integrator;
}

/// Integral over (0,1) of f(x, 1-x).
template <class F>
double integrateUnit(F&& f, double relTol = 1e-12) {
  auto g = [&](double x, double xc) {
    const double oneMinusX = xc > 0 ? xc : 1.0 - x;
    return f(x, oneMinusX);
  };
  double error = 0, l1 = 0;
  return tanhSinh().integrate(g, 0.0, 1.0, relTol, &error, &l1);
}

/// Integral over (a,b) of a plain integrand.
template <class F>
double integrateInterval(F&& f, double a, double b, double relTol = 1e-12) {
  double error = 0, l1 = 0;
  return tanhSinh().integrate([&](double x) { return f(x); }, a, b, relTol, &error, &l1);
}

}  // namespace wrt::detail
