#pragma once

#include <cstddef>
#include <vector>

#include "pshlab/grid_function.hpp"
#include "pshlab/radial.hpp"

namespace pshlab {

struct EnvelopeResult {
  GridFunction env;
  /// env == input within 1e-10 (1 + |input|).
  std::vector<bool> contact;
  /// Discrete Monge-Ampere mass n s_L^{n-1} (s_R - s_L) at each node from the left
  /// and right slopes of env; zero at the two end nodes and inside linear pieces.
  std::vector<double> discrete_ma;
  int n = 1;

  double total_ma() const;
  double off_contact_ma() const;
};

/// Largest convex nondecreasing piecewise-linear minorant of g on its grid:
/// lower convex hull, flattened to the left of its (leftmost) minimiser.
EnvelopeResult convex_increasing_minorant(const GridFunction& g, int n = 1);

struct EnvelopeGrid {
  double t_lo = -1.0e3;
  double t_hi = -1.0e-3;
  std::size_t nodes = 4096;
};

struct EnvelopePowerResult {
  EnvelopeResult envelope;
  /// Slope of env on the first cell, for the base grid and grids reaching 10x and 100x further.
  std::vector<double> left_slopes;
  /// Fitted exponent of left slope against grid extent.
  double slope_decay = 0.0;
  /// No pole mass: left slope^n <= 1e-4, or the left slope decays with the extent.
  bool full_mass = false;
};

/// Samples -(-chi)^q of the potential (Ball-shifted chi) on `ts`.
GridFunction compose_power(const RadialPotential& rp, double q, const std::vector<double>& ts);

/// Envelope of -(-v)^q on log-spaced grids, with the full-mass test.
EnvelopePowerResult envelope_power(const RadialPotential& rp, double q, const EnvelopeGrid& grid = {});

}  // namespace pshlab
