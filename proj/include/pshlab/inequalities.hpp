#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pshlab/quad.hpp"
#include "pshlab/radial.hpp"

namespace pshlab {

enum class ReportVerdict { Holds, Violated, Skipped };

std::string to_string(ReportVerdict v);

using ParamValue = std::variant<double, std::string>;
using Params = std::vector<std::pair<std::string, ParamValue>>;

struct InequalityReport {
  std::string name;
  Params params;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  /// rhs - lhs.
  double margin = std::numeric_limits<double>::quiet_NaN();
  ReportVerdict verdict = ReportVerdict::Skipped;
  std::string reason;
  /// Quadrature behind the report, when there is a single one.
  std::optional<IntegralVerdict> quad;
};

/// Holds iff rhs - lhs >= -1e-9 (1 + |rhs|).
InequalityReport make_report(std::string name, Params params, double lhs, double rhs);
InequalityReport skipped_report(std::string name, Params params, std::string reason);

/// Report for "integral is finite": lhs = tail exponent, rhs = -1. Finite gives
/// Holds, Divergent gives Violated, Inconclusive gives Skipped.
InequalityReport finiteness_report(std::string name, Params params, const IntegralVerdict& v);

/// Compares a verdict with the expected kind. Expected finite asserts
/// tail exponent <= -1, expected divergent asserts -1 <= tail exponent; an
/// Inconclusive verdict is Skipped.
InequalityReport expectation_report(std::string name, Params params, const IntegralVerdict& v,
                                    bool expect_finite);

/// s t <= (s+1) log(s+1) - s + e^t - t - 1, with equality at t = log(1+s).
InequalityReport young_pair(double s, double t);

/// Young pair on a log grid of size x size over (1e-3, 20]^2, plus `probes`
/// equality checks at seeded random s.
std::vector<InequalityReport> young_suite(int size, int probes, std::uint64_t seed);

/// 2n(n+1)/(n+p).
double mt_bound(int n, double p);

/// The default c grid: {0.1, ..., 0.9} times mt_bound.
std::vector<double> default_mt_grid(int n, double p);

/// One report per c (Holds iff the Moser-Trudinger integral is finite; a
/// divergence only counts as Violated inside c <= 0.9 mt_bound) and an
/// `mt_range` report asserting that the empirical threshold c* is at least
/// 0.9 mt_bound. Throws PreconditionError if E_p diverges.
std::vector<InequalityReport> check_mt(const RadialPotential& rp, double p,
                                       const std::vector<double>& c_grid, const QuadConfig& cfg);

/// Largest c with a finite Moser-Trudinger integral, by bisection on verdict
/// kinds; +inf when c = 64 mt_bound is still finite.
double mt_threshold(const RadialPotential& rp, double p, double energy_value,
                    const std::vector<double>& c_grid, const QuadConfig& cfg);

/// log int e^{-k v} <= A k^{1+n/p} E_p^{1/p} + B with (c, B) from the largest
/// verified c of the default grid, per k, plus an `aubin_slope` report on the
/// growth exponent of log int e^{-k v} in k (at most 1 + n/p + 0.1).
std::vector<InequalityReport> check_aubin(const RadialPotential& rp, double p,
                                          const std::vector<double>& k_list, const QuadConfig& cfg);

/// A = p n^{n/p} / (c^{n/p} (n+p)^{1+n/p}).
double aubin_constant(int n, double p, double c);

/// s^{n+p} Cap(v <= -s) <= ((n+p)/(n+1))^n E_p for each s; Skipped for unbounded weights.
std::vector<InequalityReport> check_capacity_energy(const RadialPotential& rp, double p,
                                                    const std::vector<double>& s_list,
                                                    const QuadConfig& cfg);

/// Tail boundedness of Vol(v <= -s) exp(beta Cap^{-1/n}) over s_list (at least
/// 4 levels): lhs = max over the last quartile, rhs = 1.1 x max over the first.
InequalityReport check_volume_capacity(const RadialPotential& rp, double beta,
                                       const std::vector<double>& s_list);

/// Members TranslatedScaled(softplus, 2^-j, 2^{jn}) of the non-compact family.
Weight noncompact_member(int n, int j);

/// Scaling of dp_proxy(member_j, 0) against eps_j = 2^-j (slope n + p - np
/// within 0.1), the band max/min <= 10 when p = n/(n-1), and a uniform
/// entropy bound. Also one row per member. Throws EstimationError with fewer
/// than 3 usable members.
std::vector<InequalityReport> noncompact_scaling(int n, double p, const std::vector<int>& j_list,
                                                 const QuadConfig& cfg);

/// For each weight with finite entropy, energy is finite at p = {0.25, 0.5,
/// 0.75, 0.95} n/(n-1) (p = 1, 2, 4, 8 when n = 1).
std::vector<InequalityReport> entropy_energy_pipeline(const std::vector<Weight>& weights, int n,
                                                 const QuadConfig& cfg);

}  // namespace pshlab
