#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>

namespace pshlab {

using Integrand = std::function<double(double)>;

struct QuadConfig {
  double rel_tol = 1e-8;
  /// Stand-in for -infinity.
  double t_floor = -1.0e6;
  /// Where the power-law tail is fitted, an ordered subinterval of (t_floor, 0).
  std::pair<double, double> tail_window{-1.0e5, -1.0e2};
  /// Half-width of the inconclusive band around the critical tail exponent -1.
  double delta_margin = 0.05;
  int max_subdivisions = 20000;
  /// Largest floor sensitivity compatible with a Finite verdict.
  double floor_tol = 1e-4;

  /// Throws InputError on inconsistent fields.
  void validate() const;
};

enum class VerdictKind { Finite, Divergent, Inconclusive };

std::string to_string(VerdictKind k);

struct IntegralVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  /// Integral over (-inf, upper]: truncated at t_floor plus the extrapolated tail
  /// when the tail is summable, the truncated integral otherwise.
  double value = 0.0;
  double abs_err = 0.0;
  /// Fitted power-law exponent of the integrand on the tail window; -inf marks
  /// superpolynomial decay, +inf superpolynomial growth.
  double tail_exponent = 0.0;
  /// Relative change of the value when t_floor is halved.
  double floor_sensitivity = 0.0;
  /// log of the integral; the primary output of integrate_halfline_log.
  double log_value = -std::numeric_limits<double>::infinity();
  std::string note;

  bool finite() const { return kind == VerdictKind::Finite; }
};

/// Integral of f over (-inf, upper] by adaptive Gauss-Kronrod panels on
/// [t_floor, upper] with an extrapolated tail. The verdict follows the tail
/// exponent: Finite below -1 - delta_margin (or superpolynomial decay), Divergent
/// above -1 + delta_margin, Inconclusive in between or when the subdivision
/// budget runs out. `breakpoints` are points where f has a kink or a narrow bump.
IntegralVerdict integrate_halfline(const Integrand& f, double upper, const QuadConfig& cfg,
                                   std::span<const double> breakpoints = {});

/// Same as integrate_halfline for an integrand given by its logarithm
/// (-inf for zero). The result's log_value stays accurate when exp would overflow.
IntegralVerdict integrate_halfline_log(const Integrand& log_f, double upper, const QuadConfig& cfg,
                                       std::span<const double> breakpoints = {});

/// Least-squares slope of log|f| against log(-t) on log-spaced samples of the
/// window. Returns -inf when an exponential model fits more than 10x better and
/// decays towards -inf (+inf if it grows). Throws EstimationError when fewer than
/// 8 usable samples remain.
double tail_exponent(const Integrand& f, std::pair<double, double> window, const QuadConfig& cfg);

/// tail_exponent for an integrand given by its logarithm.
double tail_exponent_log(const Integrand& log_f, std::pair<double, double> window,
                         const QuadConfig& cfg);

/// Classification rule shared by all verdicts.
VerdictKind classify_exponent(double beta, double delta_margin);

/// The configured tail window, pushed below every breakpoint so that it only
/// sees the asymptotic regime.
std::pair<double, double> effective_window(const QuadConfig& cfg,
                                           std::span<const double> breakpoints);

/// Plain adaptive integral of f on a finite interval [a, b].
double integrate_interval(const Integrand& f, double a, double b, double rel_tol = 1e-10);

}  // namespace pshlab
