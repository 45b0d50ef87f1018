#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pshlab/grid_function.hpp"

namespace pshlab {

inline constexpr double kDefaultTFloor = -1.0e6;

class Weight;

// Families of convex nondecreasing weights chi: (-inf, 0] -> R.

/// -(-t)^a / a for t <= -1, quadratic blend on [-1, 0].
struct PowerAlpha {
  double alpha;
};

/// -(-t)^r for t <= -1, quadratic blend on [-1, 0].
struct DivisorPower {
  double r;
};

/// e^t - 1.
struct Exp {};

/// log(1 + e^t), the smoothed kink.
struct SoftplusKink {};

/// eps * base(t + C) - eps * C.
struct TranslatedScaled {
  std::shared_ptr<const Weight> base;
  double eps;
  double shift;
};

/// Monotone-convex piecewise quadratic through convex nondecreasing samples.
/// Each cell [t_i, t_{i+1}] is split at an interior knot so that the slope is
/// continuous and piecewise linear; extrapolation is linear with the end slopes.
struct Tabulated {
  GridFunction grid;
  std::vector<double> node_slopes;
  std::vector<double> knots;  // one per cell, NaN for linear cells
  std::string label;
};

class Weight {
 public:
  using Family =
      std::variant<PowerAlpha, DivisorPower, Exp, SoftplusKink, TranslatedScaled, Tabulated>;

  static Weight power_alpha(double alpha);
  static Weight divisor_power(double r);
  static Weight exp();
  static Weight softplus();
  static Weight translated_scaled(const Weight& base, double eps, double shift);
  static Weight tabulated(GridFunction grid);
  /// chi(t) = t, the pure log pole (all Monge-Ampere mass at the origin).
  static Weight identity();
  /// chi = 0.
  static Weight zero();

  /// Parses `power:0.45`, `divpower:0.5`, `exp`, `softplus`, `ts:<base>:eps:C`,
  /// `identity`, `zero`, `tab:<csv path>`.
  static Weight parse(const std::string& spec);

  const Family& family() const { return family_; }
  double t_floor() const { return t_floor_; }
  Weight with_floor(double t_floor) const;

  // Unchecked evaluation on the whole real line; families are extended past 0
  // (blends continue, tables extrapolate linearly) so translated weights can
  // look up base(t + C) with t + C > 0.
  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;

  /// Points where a piece joins another or where the curvature concentrates.
  std::vector<double> breakpoints() const;

  /// Human-readable spec, inverse of parse for the built-in families.
  std::string describe() const;

 private:
  explicit Weight(Family f) : family_(std::move(f)) {}
  Family family_;
  double t_floor_ = kDefaultTFloor;
};

/// chi(t); throws DomainError for t > 0.
double eval(const Weight& w, double t);

/// chi'(t) or chi''(t); throws DomainError for t > 0 and InputError for order not in {1, 2}.
double deriv(const Weight& w, double t, int order);

/// Samples of t -> -(-chi(t))^q on the given nodes. This is the obstacle fed to
/// the envelope and is not convex in general. Throws PoleError where chi > 0.
GridFunction compose_power(const Weight& w, double q, const std::vector<double>& ts);

}  // namespace pshlab
