#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "wrt/asymptotics.hpp"

using namespace wrt;

namespace {
double rel(double a, double b) { return std::abs(a / b - 1.0); }
const WeightLaw kGapped = WeightLaw::atomMix(0.5, ConstantLaw{0.5});
}  // namespace

TEST_CASE("random recursive tree centering") {
  const auto c = centeringFor(WeightLaw::constant(1.0));
  CHECK((c.tag == CenteringCase::Atom));
  CHECK(c.cOfN(8) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(c.epsN(8) == 0.0);
  CHECK(c.floorCenter(8) == 3);
  CHECK(c.intensityConst == 1.0);
  CHECK(c.epsN(1024) == 0.0);
  CHECK(c.floorCenter(1024) == 10);
}

TEST_CASE("Beta centering constant") {
  const auto c = centeringFor(WeightLaw::beta(0.5, 0.5));
  CHECK((c.tag == CenteringCase::BetaWeibull));
  CHECK(c.theta == 1.5);
  CHECK(rel(c.intensityConst, std::sqrt(3.0 / std::numbers::pi)) < 1e-13);
  CHECK(c.beta == 0.5);
  const auto b23 = centeringFor(WeightLaw::beta(2, 3));
  CHECK(rel(b23.intensityConst, 1029.0) < 1e-12);  // 12 * (2/7)^{-3}
}

TEST_CASE("gamma-fraction centering constants") {
  const auto c = centeringFor(WeightLaw::gammaFraction(0, 1));
  CHECK((c.tag == CenteringCase::GammaFractionGumbel));
  CHECK(rel(c.cTheta, (2 / std::log(c.theta)) * std::sqrt(1 - 1 / c.theta)) < 1e-14);
  CHECK(rel(c.cTheta, 3.16303959764744491586) < 1e-9);
  CHECK(rel(c.intensityConst, 8.17260957367645926078) < 1e-9);
  CHECK(c.logCoef == 0.25);
  const auto c2 = centeringFor(WeightLaw::gammaFraction(1, 0.5));
  CHECK(rel(c2.cTheta, 4.72404707358362671187) < 1e-9);
  CHECK(rel(c2.intensityConst, 22.4566196887601234464) < 1e-9);
  CHECK(c2.logCoef == 0.75);
  CHECK(rel(gumbelSecondOrderConst(c.theta, 1.0, 1.0), c.cTheta) < 1e-15);
}

TEST_CASE("centering rejects laws without mass near one") {
  CHECK_THROWS_AS(centeringFor(WeightLaw::constant(0.7)), std::invalid_argument);
}

TEST_CASE("fractional parts and monotone centering") {
  const std::vector<Centering> cases{centeringFor(WeightLaw::constant(1)), centeringFor(kGapped),
                                     centeringFor(WeightLaw::beta(2, 3)), centeringFor(WeightLaw::beta(0.5, 0.5)),
                                     centeringFor(WeightLaw::gammaFraction(0, 1)),
                                     centeringFor(WeightLaw::gammaFraction(1, 0.5)),
                                     centeringForRaV({2.0, 1.0, 0.0, 1.5}), centeringForRaV({0.5, 2.0, 0.0, 1.8})};
  for (const auto& c : cases) {
    const std::string tag = wrt::toString(c.tag);
    CAPTURE(tag);
    double prev = -INFINITY;
    for (double n = 1e4; n <= 1e12; n *= 1.1) {
      const double e = c.epsN(n);
      CHECK(e >= 0.0);
      CHECK(e < 1.0);
      CHECK(c.cOfN(n) > prev);
      prev = c.cOfN(n);
      CHECK(static_cast<double>(c.floorCenter(n)) + e == doctest::Approx(c.cOfN(n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("atom-case predictions at n = 1e5") {
  const auto c = centeringFor(kGapped);
  CHECK(c.theta == 1.75);
  CHECK(std::abs(c.epsN(1e5) - 0.572910402411255254770) < 1e-12);
  CHECK(rel(maxTailPrediction(c, 1e5, 2), 0.201463269054592191442) < 1e-12);
  CHECK(rel(bucketMeans(c, 1e5, 0).meanXi, 0.295278785095091133994) < 1e-12);
  const double eps = c.epsN(1e5);
  CHECK(rel(maximizerCountPmf(c, eps, 1), 0.765831427588411781578) < 1e-10);
  CHECK(rel(maximizerCountPmf(c, eps, 2), 0.164106128532023894278) < 1e-10);
  CHECK(rel(maximizerCountPmf(c, eps, 3), 0.0468878669246198103839) < 1e-10);
}

TEST_CASE("bucket means") {
  const auto rrt = centeringFor(WeightLaw::constant(1));
  const auto m = bucketMeans(rrt, 1024, 0);
  CHECK(m.meanXi == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.meanXgeq == doctest::Approx(1.0).epsilon(1e-15));
  for (const auto& c : {rrt, centeringFor(kGapped), centeringFor(WeightLaw::beta(2, 3)),
                        centeringFor(WeightLaw::gammaFraction(0, 1))})
    for (double n : {1e3, 1e5, 3.3e6})
      for (int i = -5; i <= 5; ++i) {
        const double lhs = bucketMeans(c, n, i).meanXi + bucketMeans(c, n, i + 1).meanXgeq;
        CHECK(std::abs(lhs - bucketMeans(c, n, i).meanXgeq) <= 1e-12 * bucketMeans(c, n, i).meanXgeq);
      }
  // Composition of the arcsine constants at n = 1e5.
  const auto arc = centeringFor(WeightLaw::beta(0.5, 0.5));
  const double geq = std::sqrt(3 / std::numbers::pi) * std::pow(1.5, -1 + arc.epsN(1e5));
  CHECK(rel(bucketMeans(arc, 1e5, 1).meanXgeq, geq) < 1e-13);
  CHECK(rel(bucketMeans(arc, 1e5, 1).meanXi, geq / 3) < 1e-13);
  CHECK_THROWS_AS(bucketMeans(centeringForRaV({}), 1e5, 0), std::invalid_argument);
}

TEST_CASE("maximum tail prediction") {
  const auto rrt = centeringFor(WeightLaw::constant(1));
  CHECK(rel(maxTailPrediction(rrt, 1024, 0), 1 - std::exp(-1.0)) < 1e-15);
  CHECK(maxTailPrediction(rrt, 1024, 60) < 1e-17);
  CHECK(maxTailPrediction(rrt, 1024, -60) == 1.0);
  for (int i = -10; i < 10; ++i) {
    CHECK(maxTailPrediction(rrt, 1e5, i) >= maxTailPrediction(rrt, 1e5, i + 1));
    if (maxTailPrediction(rrt, 1e5, i) < 1.0) CHECK(maxTailPrediction(rrt, 1e5, i) > maxTailPrediction(rrt, 1e5, i + 1));
  }
  CHECK_THROWS_AS(maxTailPrediction(rrt, 1024, 0, 0.5), std::invalid_argument);
  const auto beta = centeringFor(WeightLaw::beta(2, 3));
  CHECK(maxTailPrediction(beta, 1e6, 25, 0.5) < maxTailPrediction(beta, 1e6, 25));
  const auto gf = centeringFor(WeightLaw::gammaFraction(0, 1));
  CHECK(maxTailPrediction(gf, 1e6, 2, 0.5) < maxTailPrediction(gf, 1e6, 2));
}

TEST_CASE("maximizer count law") {
  const auto rrt = centeringFor(WeightLaw::constant(1));
  double total = 0.0;
  for (int k = 1; k <= 60; ++k) {
    const double p = maximizerCountPmf(rrt, 0.0, k);
    CHECK(p > 0.0);
    total += p;
  }
  CHECK(std::abs(total - 1.0) <= 1e-9);
  for (const auto& c : {rrt, centeringFor(kGapped), centeringFor(WeightLaw::beta(2, 3))})
    for (int k = 1; k <= 5; ++k) CHECK(std::abs(maximizerCountPmf(c, 0.0, k) - maximizerCountPmf(c, 1.0, k)) < 1e-9);
  CHECK_THROWS_AS(maximizerCountPmf(rrt, 0.0, 0), std::invalid_argument);
}

TEST_CASE("s_k and r_k for Beta(2,3)") {
  const auto law = WeightLaw::beta(2, 3);
  const double expected[][3] = {{1, 0.213159771753072888937, 0.798666758217888215},
                                {10, 0.533631413773907273757, 0.263821728456601639},
                                {100, 0.847082084701304901973, 0.0126628433503546082},
                                {1000, 0.968471280687704075896, 1.22401306025642730e-4},
                                {1e4, 0.994934336994479673289, 5.1798328014759147e-7}};
  for (const auto& row : expected) {
    const auto v = skRk(law, row[0]);
    CHECK(std::abs(v.sk - row[1]) < 1e-10);
    CHECK(rel(v.rk, row[2]) < 1e-7);
  }
  auto prev = skRk(law, 1);
  for (int k = 2; k <= 1000; ++k) {
    const auto v = skRk(law, k);
    CHECK(v.sk >= prev.sk);
    CHECK(v.rk <= prev.rk);
    CHECK(v.sk > 0.0);
    CHECK(v.sk < 1.0);
    prev = v;
  }
  CHECK(skRk(law, 1e4).rk < 1e-3);
}

TEST_CASE("s_k and r_k for the gapped atom law") {
  const double g = 1 - 1 / 1.75;
  for (double k : {40.0, 100.0, 1000.0}) {
    const auto v = skRk(kGapped, k);
    CHECK(v.sk == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rel(v.rk, std::exp(-g * 0.5 * k)) < 1e-9);
    CHECK(rel(v.logRk, -g * 0.5 * k) < 1e-12);
  }
  CHECK(skRk(kGapped, 1e4).rk == 0.0);
  CHECK(std::isfinite(skRk(kGapped, 1e4).logRk));
}

TEST_CASE("second-order limits") {
  CHECK(secondOrderLimit(WeightLaw::beta(2, 3)) == -3.0);
  const auto gf = centeringFor(WeightLaw::gammaFraction(0, 1));
  CHECK(secondOrderLimit(WeightLaw::gammaFraction(0, 1)) == -gf.cTheta);
  CHECK_THROWS_AS(secondOrderLimit(kGapped), std::invalid_argument);
  for (double tau : {0.5, 2.0, 3.5}) {
    const auto rav = centeringForRaV({tau, 1.3, 0.0, 1.6});
    CHECK(rel(rav.c2Const / rav.c1Const, tau * (tau - 1)) < 1e-14);
    CHECK(secondOrderLimit(rav) == rav.c3Const);
  }
}

TEST_CASE("centering terms add up") {
  for (const auto& c : {centeringFor(WeightLaw::beta(2, 3)), centeringFor(WeightLaw::gammaFraction(1, 0.5)),
                        centeringForRaV({2.0, 1.0, 0.0, 1.5})}) {
    const auto t = c.terms(1e6);
    CHECK(t.at("c_n").get<double>() == doctest::Approx(c.cOfN(1e6)));
    double sum = 0.0;
    for (const char* key : {"log_theta_n", "second_order", "third_order", "fourth_order"})
      if (t.contains(key)) sum += t.at(key).get<double>();
    CHECK(sum == doctest::Approx(c.cOfN(1e6)).epsilon(1e-12));
  }
}
