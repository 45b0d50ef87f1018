#include "pshlab/divisorial.hpp"

#include <cmath>

#include "pshlab/errors.hpp"
#include "pshlab/radial.hpp"

namespace pshlab {

namespace {

constexpr double kUpper = -1.0;

void require_negative(const Weight& w) {
  // chi is nondecreasing, so chi(-1) < 0 covers the whole slice.
  if (!(w.value(kUpper) < 0.0))
    throw PreconditionError("divisorial energy needs chi < 0 on (-inf, -1]: " + w.describe());
}

}  // namespace

IntegralVerdict div_entropy(const Weight& w, const QuadConfig& cfg) {
  const Integrand f = [&w](double t) {
    const double d2 = w.d2(t);
    return d2 > 0.0 ? -t * d2 : 0.0;
  };
  return integrate_halfline(f, kUpper, cfg, w.breakpoints());
}

IntegralVerdict div_energy(const Weight& w, double p, const QuadConfig& cfg) {
  if (!(p > 0.0)) throw InputError("divisorial energy needs p > 0");
  require_negative(w);
  const Integrand f = [&w, p](double t) {
    const double d2 = w.d2(t);
    return d2 > 0.0 ? std::pow(-w.value(t), p) * d2 : 0.0;
  };
  return integrate_halfline(f, kUpper, cfg, w.breakpoints());
}

double div_critical_p(const Weight& w, const QuadConfig& cfg) {
  require_negative(w);
  const double p_star = power_tail_root([&w](double t) { return std::max(w.d2(t), 0.0); },
                                        [&w](double t) { return -w.value(t); },
                                        w.breakpoints(), cfg);
  return critical_by_bisection([&](double p) { return div_energy(w, p, cfg).kind; }, p_star);
}

}  // namespace pshlab
