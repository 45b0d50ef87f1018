#pragma once

#include <cstddef>
#include <vector>

namespace pshlab {

/// Samples of a real function on a strictly increasing grid.
struct GridFunction {
  std::vector<double> ts;
  std::vector<double> vals;

  std::size_t size() const { return ts.size(); }

  /// Throws InputError unless ts is strictly increasing, sizes match, size >= 2
  /// and all values are finite.
  void validate() const;
};

std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Nodes -|t| spaced geometrically between lo < hi < 0.
std::vector<double> negative_logspace(double lo, double hi, std::size_t count);

}  // namespace pshlab
