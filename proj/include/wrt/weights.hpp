#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wrt/random.hpp"

namespace wrt {

struct ConstantLaw {
  double value = 1.0;
};

struct BetaLaw {
  double alpha = 1.0;
  double beta = 1.0;
};

/// P(W >= x) = (1-x)^{-b} exp(-x / (c1 (1-x))) on [0,1).
struct GammaFractionLaw {
  double b = 0.0;
  double c1 = 1.0;
};

/// Law of the non-atomic part of an atom mixture. Constant values must lie
/// strictly below one.
using BaseLaw = std::variant<ConstantLaw, BetaLaw>;

/// Atom of mass q0 at one, remaining mass 1-q0 distributed as `base`.
struct AtomMixLaw {
  double q0 = 1.0;
  std::optional<BaseLaw> base;
};

struct AtomTag {
  double q0;
};
struct WeibullTag {
  double alphaMinusOne;
};
struct GumbelRvTag {
  double tau;
  double c1;
  double b;
};

/// Maximum-domain-of-attraction class of a law near its upper endpoint 1.
using MdaTag = std::variant<AtomTag, WeibullTag, GumbelRvTag>;

/// Immutable, validated vertex-weight distribution on (0,1].
class WeightLaw {
 public:
  using Variant = std::variant<ConstantLaw, AtomMixLaw, BetaLaw, GammaFractionLaw>;

  static WeightLaw constant(double value);
  static WeightLaw atomMix(double q0, std::optional<BaseLaw> base = std::nullopt);
  static WeightLaw beta(double alpha, double beta);
  static WeightLaw gammaFraction(double b, double c1);

  const Variant& variant() const { return law_; }

  /// Exact draw.
  double sample(RandomStream& rng) const;

  double mean() const { return mean_; }
  double theta() const { return 1.0 + mean_; }

  /// P(W > x) for x in [0,1). Throws std::domain_error outside.
  double tail(double x) const;

  /// P(W = 1).
  double atomAtOne() const;

  /// Density of the absolutely continuous part at x in (0,1), given 1-x.
  /// Zero for laws without a continuous part.
  double continuousDensity(double x, double oneMinusX) const;

  /// Mass of the continuous part (1 - total atom mass).
  double continuousMass() const;

  /// Point masses as (location, mass) pairs, including any atom at one.
  std::vector<std::pair<double, double>> atoms() const;

  /// Throws std::invalid_argument for laws whose support does not reach 1.
  MdaTag mdaClass() const;

  /// Short human-readable description, e.g. "beta(2,3)".
  std::string describe() const;

  friend bool operator==(const WeightLaw& a, const WeightLaw& b) { return a.toJson() == b.toJson(); }

  nlohmann::json toJson() const;
  static WeightLaw fromJson(const nlohmann::json& j);

  /// Accepts inline JSON or one of the named presets (see presetNames()).
  static WeightLaw parse(const std::string& text);
  static std::string presetNames();

 private:
  explicit WeightLaw(Variant law);

  Variant law_;
  double mean_ = 1.0;
};

namespace detail {
double gammaFractionTail(const GammaFractionLaw& law, double x);
double gammaFractionDensity(const GammaFractionLaw& law, double oneMinusX);
}  // namespace detail

}  // namespace wrt
