#pragma once

#include "pshlab/quad.hpp"
#include "pshlab/weights.hpp"

namespace pshlab {

// Transverse slice of a potential chi(log|s|_h) near a smooth point of the
// divisor; t = log|z_1| and only the normal integrals are modelled.

/// int_{-inf}^{-1} (-t) chi''(t) dt.
IntegralVerdict div_entropy(const Weight& w, const QuadConfig& cfg);

/// int_{-inf}^{-1} (-chi)^p chi''(t) dt. Throws PreconditionError unless chi < 0 on the range.
IntegralVerdict div_energy(const Weight& w, double p, const QuadConfig& cfg);

/// Supremum of p with div_energy finite (+inf for bounded weights).
double div_critical_p(const Weight& w, const QuadConfig& cfg);

}  // namespace pshlab
