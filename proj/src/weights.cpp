#include "wrt/weights.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "quadrature.hpp"

namespace wrt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate(const ConstantLaw& law, bool base) {
  if (!(law.value > 0.0 && law.value <= 1.0))
    throw std::invalid_argument("constant weight must lie in (0,1]");
  if (base && law.value >= 1.0)
    throw std::invalid_argument("constant base law must lie strictly below 1");
}

void validate(const BetaLaw& law) {
  if (!(law.alpha > 0.0 && law.beta > 0.0) || !std::isfinite(law.alpha) || !std::isfinite(law.beta))
    throw std::invalid_argument("beta law requires alpha > 0 and beta > 0");
}

void validate(const GammaFractionLaw& law) {
  if (!(law.c1 > 0.0) || !std::isfinite(law.c1) || !std::isfinite(law.b))
    throw std::invalid_argument("gamma-fraction law requires c1 > 0 and finite b");
  if (law.b * law.c1 > 1.0)
    throw std::invalid_argument("gamma-fraction law requires b*c1 <= 1 (density would be negative)");
}

double betaLogDensity(const BetaLaw& law, double x, double oneMinusX) {
  using boost::math::beta;
  return (law.alpha - 1.0) * std::log(x) + (law.beta - 1.0) * std::log(oneMinusX) -
         std::log(beta(law.alpha, law.beta));
}

double sampleBeta(const BetaLaw& law, RandomStream& rng) {
  std::gamma_distribution<double> ga(law.alpha, 1.0);
  std::gamma_distribution<double> gb(law.beta, 1.0);
  for (;;) {
    const double x = ga(rng);
    const double y = gb(rng);
    const double w = x / (x + y);
    if (w > 0.0 && w <= 1.0) return w;
  }
}

double sampleBase(const BaseLaw& base, RandomStream& rng) {
  return std::visit(Overloaded{[](const ConstantLaw& c) { return c.value; },
                               [&](const BetaLaw& b) { return sampleBeta(b, rng); }},
                    base);
}

double baseMean(const BaseLaw& base) {
  return std::visit(Overloaded{[](const ConstantLaw& c) { return c.value; },
                               [](const BetaLaw& b) { return b.alpha / (b.alpha + b.beta); }},
                    base);
}

double baseTail(const BaseLaw& base, double x) {
  return std::visit(Overloaded{[&](const ConstantLaw& c) { return x < c.value ? 1.0 : 0.0; },
                               [&](const BetaLaw& b) { return boost::math::ibetac(b.alpha, b.beta, x); }},
                    base);
}

double gammaFractionMean(const GammaFractionLaw& law) {
  return detail::integrateUnit(
      [&](double x, double y) { return x * detail::gammaFractionDensity(law, y); }, 1e-13);
}

nlohmann::json baseToJson(const BaseLaw& base) {
  return std::visit(
      Overloaded{[](const ConstantLaw& c) { return nlohmann::json{{"kind", "constant"}, {"value", c.value}}; },
                 [](const BetaLaw& b) {
                   return nlohmann::json{{"kind", "beta"}, {"alpha", b.alpha}, {"beta", b.beta}};
                 }},
      base);
}

BaseLaw baseFromJson(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return ConstantLaw{j.at("value").get<double>()};
  if (kind == "beta") return BetaLaw{j.at("alpha").get<double>(), j.at("beta").get<double>()};
  throw std::invalid_argument("unsupported base law kind: " + kind);
}

std::string describeBase(const BaseLaw& base) {
  std::ostringstream os;
  std::visit(Overloaded{[&](const ConstantLaw& c) { os << "constant(" << c.value << ")"; },
                        [&](const BetaLaw& b) { os << "beta(" << b.alpha << "," << b.beta << ")"; }},
             base);
  return os.str();
}

}  // namespace

namespace detail {

double gammaFractionTail(const GammaFractionLaw& law, double x) {
  const double y = 1.0 - x;
  return std::exp(-law.b * std::log(y) - x / (law.c1 * y));
}

double gammaFractionDensity(const GammaFractionLaw& law, double oneMinusX) {
  const double y = oneMinusX;
  if (!(y > 0.0)) return 0.0;
  const double lead = 1.0 / law.c1 - law.b * y;
  if (!(lead > 0.0)) return 0.0;
  const double x = 1.0 - y;
  return std::exp(std::log(lead) - (law.b + 2.0) * std::log(y) - x / (law.c1 * y));
}

}  // namespace detail

WeightLaw::WeightLaw(Variant law) : law_(std::move(law)) {
  mean_ = std::visit(Overloaded{[](const ConstantLaw& c) { return c.value; },
                                [](const AtomMixLaw& a) {
                                  return a.q0 + (a.base ? (1.0 - a.q0) * baseMean(*a.base) : 0.0);
                                },
                                [](const BetaLaw& b) { return b.alpha / (b.alpha + b.beta); },
                                [](const GammaFractionLaw& g) { return gammaFractionMean(g); }},
                     law_);
}

WeightLaw WeightLaw::constant(double value) {
  ConstantLaw law{value};
  validate(law, false);
  return WeightLaw(law);
}

WeightLaw WeightLaw::atomMix(double q0, std::optional<BaseLaw> base) {
  if (!(q0 > 0.0 && q0 <= 1.0)) throw std::invalid_argument("atom mass q0 must lie in (0,1]");
  if (q0 < 1.0 && !base) throw std::invalid_argument("atom mixture with q0 < 1 needs a base law");
  if (base) {
    std::visit(Overloaded{[](const ConstantLaw& c) { validate(c, true); },
                          [](const BetaLaw& b) { validate(b); }},
               *base);
  }
  if (q0 == 1.0) base.reset();
  return WeightLaw(AtomMixLaw{q0, base});
}

WeightLaw WeightLaw::beta(double alpha, double beta) {
  BetaLaw law{alpha, beta};
  validate(law);
  return WeightLaw(law);
}

WeightLaw WeightLaw::gammaFraction(double b, double c1) {
  GammaFractionLaw law{b, c1};
  validate(law);
  return WeightLaw(law);
}

double WeightLaw::sample(RandomStream& rng) const {
  return std::visit(
      Overloaded{[](const ConstantLaw& c) { return c.value; },
                 [&](const AtomMixLaw& a) {
                   if (!a.base) return 1.0;
                   // Drawing u first keeps the number of consumed variates per
                   // atom draw fixed at one.
                   return rng.uniform() < a.q0 ? 1.0 : sampleBase(*a.base, rng);
                 },
                 [&](const BetaLaw& b) { return sampleBeta(b, rng); },
                 [&](const GammaFractionLaw& g) {
                   const double u = rng.uniformOpenClosed();
                   double lo = 0.0;
                   double hi = 1.0 - 1e-15;
                   for (int it = 0; it < 60; ++it) {
                     const double mid = 0.5 * (lo + hi);
                     if (detail::gammaFractionTail(g, mid) > u)
                       lo = mid;
                     else
                       hi = mid;
                   }
                   return hi;
                 }},
      law_);
}

double WeightLaw::tail(double x) const {
  if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("tail(x) requires 0 <= x < 1");
  return std::visit(Overloaded{[&](const ConstantLaw& c) { return x < c.value ? 1.0 : 0.0; },
                               [&](const AtomMixLaw& a) {
                                 return a.q0 + (a.base ? (1.0 - a.q0) * baseTail(*a.base, x) : 0.0);
                               },
                               [&](const BetaLaw& b) { return boost::math::ibetac(b.alpha, b.beta, x); },
                               [&](const GammaFractionLaw& g) { return detail::gammaFractionTail(g, x); }},
                    law_);
}

double WeightLaw::atomAtOne() const {
  return std::visit(Overloaded{[](const ConstantLaw& c) { return c.value == 1.0 ? 1.0 : 0.0; },
                               [](const AtomMixLaw& a) { return a.q0; },
                               [](const auto&) { return 0.0; }},
                    law_);
}

double WeightLaw::continuousDensity(double x, double oneMinusX) const {
  auto beta = [&](const BetaLaw& b) { return std::exp(betaLogDensity(b, x, oneMinusX)); };
  return std::visit(Overloaded{[](const ConstantLaw&) { return 0.0; },
                               [&](const AtomMixLaw& a) {
                                 if (!a.base || !std::holds_alternative<BetaLaw>(*a.base)) return 0.0;
                                 return (1.0 - a.q0) * beta(std::get<BetaLaw>(*a.base));
                               },
                               [&](const BetaLaw& b) { return beta(b); },
                               [&](const GammaFractionLaw& g) { return detail::gammaFractionDensity(g, oneMinusX); }},
                    law_);
}

double WeightLaw::continuousMass() const {
  return std::visit(Overloaded{[](const ConstantLaw&) { return 0.0; },
                               [](const AtomMixLaw& a) {
                                 return a.base && std::holds_alternative<BetaLaw>(*a.base) ? 1.0 - a.q0 : 0.0;
                               },
                               [](const auto&) { return 1.0; }},
                    law_);
}

std::vector<std::pair<double, double>> WeightLaw::atoms() const {
  std::vector<std::pair<double, double>> out;
  std::visit(Overloaded{[&](const ConstantLaw& c) { out.emplace_back(c.value, 1.0); },
                        [&](const AtomMixLaw& a) {
                          out.emplace_back(1.0, a.q0);
                          if (a.base && std::holds_alternative<ConstantLaw>(*a.base))
                            out.emplace_back(std::get<ConstantLaw>(*a.base).value, 1.0 - a.q0);
                        },
                        [](const auto&) {}},
             law_);
  return out;
}

MdaTag WeightLaw::mdaClass() const {
  return std::visit(Overloaded{[](const ConstantLaw& c) -> MdaTag {
                                 if (c.value != 1.0)
                                   throw std::invalid_argument("constant law below 1 has no mass near 1");
                                 return AtomTag{1.0};
                               },
                               [](const AtomMixLaw& a) -> MdaTag { return AtomTag{a.q0}; },
                               [](const BetaLaw& b) -> MdaTag { return WeibullTag{b.beta}; },
                               [](const GammaFractionLaw& g) -> MdaTag { return GumbelRvTag{1.0, g.c1, g.b}; }},
                    law_);
}

std::string WeightLaw::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{[&](const ConstantLaw& c) { os << "constant(" << c.value << ")"; },
                        [&](const AtomMixLaw& a) {
                          os << "atom_mix(q0=" << a.q0;
                          if (a.base) os << ", " << describeBase(*a.base);
                          os << ")";
                        },
                        [&](const BetaLaw& b) { os << "beta(" << b.alpha << "," << b.beta << ")"; },
                        [&](const GammaFractionLaw& g) { os << "gamma_fraction(b=" << g.b << ",c1=" << g.c1 << ")"; }},
             law_);
  return os.str();
}

nlohmann::json WeightLaw::toJson() const {
  return std::visit(Overloaded{[](const ConstantLaw& c) {
                                 return nlohmann::json{{"kind", "constant"}, {"value", c.value}};
                               },
                               [](const AtomMixLaw& a) {
                                 nlohmann::json j{{"kind", "atom_mix"}, {"q0", a.q0}};
                                 if (a.base) j["base"] = baseToJson(*a.base);
                                 return j;
                               },
                               [](const BetaLaw& b) {
                                 return nlohmann::json{{"kind", "beta"}, {"alpha", b.alpha}, {"beta", b.beta}};
                               },
                               [](const GammaFractionLaw& g) {
                                 return nlohmann::json{{"kind", "gamma_fraction"}, {"b", g.b}, {"c1", g.c1}};
                               }},
                    law_);
}

WeightLaw WeightLaw::fromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("weight law must be a JSON object");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(j.at("value").get<double>());
  if (kind == "beta") return beta(j.at("alpha").get<double>(), j.at("beta").get<double>());
  if (kind == "gamma_fraction") return gammaFraction(j.at("b").get<double>(), j.at("c1").get<double>());
  if (kind == "atom_mix") {
    std::optional<BaseLaw> base;
    if (j.contains("base") && !j.at("base").is_null()) base = baseFromJson(j.at("base"));
    return atomMix(j.at("q0").get<double>(), base);
  }
  throw std::invalid_argument("unknown weight law kind: " + kind);
}

WeightLaw WeightLaw::parse(const std::string& text) {
  if (text == "rrt") return constant(1.0);
  if (text == "atom") return atomMix(0.5, ConstantLaw{0.5});
  if (text == "beta") return beta(2.0, 3.0);
  if (text == "arcsine") return beta(0.5, 0.5);
  if (text == "gamma") return gammaFraction(0.0, 1.0);
  if (text == "gamma-b1") return gammaFraction(1.0, 0.5);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw std::invalid_argument("law must be inline JSON or one of: " + presetNames());
  }
  try {
    return fromJson(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed law JSON: ") + e.what());
  }
}

std::string WeightLaw::presetNames() { return "rrt, atom, beta, arcsine, gamma, gamma-b1"; }

}  // namespace wrt
