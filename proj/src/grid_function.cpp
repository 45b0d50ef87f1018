#include "pshlab/grid_function.hpp"

#include <cmath>
#include <string>

#include "pshlab/errors.hpp"

namespace pshlab {

void GridFunction::validate() const {
  if (ts.size() != vals.size()) throw InputError("grid: ts and vals differ in length");
  if (ts.size() < 2) throw InputError("grid: need at least 2 nodes");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!std::isfinite(ts[i]) || !std::isfinite(vals[i]))
      throw InputError("grid: non-finite entry at index " + std::to_string(i));
    if (i > 0 && !(ts[i] > ts[i - 1]))
      throw InputError("grid: nodes not strictly increasing at index " + std::to_string(i));
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = hi;
  return out;
}

std::vector<double> negative_logspace(double lo, double hi, std::size_t count) {
  if (!(lo < hi && hi < 0.0)) throw InputError("negative_logspace: need lo < hi < 0");
  std::vector<double> out(count);
  const double a = std::log(-lo);
  const double b = std::log(-hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = -std::exp(u);
  }
  out.front() = lo;
  if (count > 1) out.back() = hi;
  return out;
}

}  // namespace pshlab
