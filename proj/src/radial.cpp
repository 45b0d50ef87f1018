#include "pshlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pshlab/errors.hpp"

namespace pshlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double neg_part(double x) { return x < 0.0 ? -x : 0.0; }

double density(const RadialPotential& rp, double t) {
  const double d2 = rp.chi_d2(t);
  if (d2 <= 0.0) return 0.0;
  const int n = rp.n();
  const double d1 = rp.chi_d1(t);
  return n == 1 ? d2 : n * std::pow(d1, n - 1) * d2;
}

IntegralVerdict atom_verdict(const RadialPotential& rp, const QuadConfig& cfg) {
  // chi'^n stays bounded away from zero: the criterion (-t) chi'^n grows linearly.
  IntegralVerdict v;
  v.kind = VerdictKind::Divergent;
  v.value = kInf;
  v.log_value = kInf;
  const auto win = effective_window(cfg, rp.breakpoints());
  const int n = rp.n();
  v.tail_exponent = tail_exponent(
      [&rp, n](double t) { return -t * std::pow(rp.chi_d1(t), n); }, win, cfg);
  v.note = "Monge-Ampere measure charges the pole";
  return v;
}

std::vector<double> merged_breakpoints(const RadialPotential& a, const RadialPotential& b) {
  auto bps = a.breakpoints();
  const auto more = b.breakpoints();
  bps.insert(bps.end(), more.begin(), more.end());
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  return bps;
}

double log_volume_factor(int n) { return std::log(2.0 * n * unit_ball_volume(n)); }

}  // namespace

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, n) / std::tgamma(n + 1.0); }

RadialPotential::RadialPotential(Weight w, int n, Model model)
    : w_(std::move(w)), n_(n), model_(model), shift_(0.0) {
  if (n < 1) throw InputError("complex dimension must be >= 1");
  if (model_ == Model::Ball) shift_ = w_.value(0.0);
}

double ReducedDensity::operator()(double t) const { return density(rp_, t); }

double ReducedDensity::mass(double t0, double t1) const {
  const int n = rp_.n();
  return std::pow(rp_.chi_d1(t1), n) - std::pow(rp_.chi_d1(t0), n);
}

ReducedDensity ma_pushforward(const RadialPotential& rp) { return ReducedDensity(rp); }

double pole_mass(const RadialPotential& rp) {
  const double floor = rp.t_floor();
  const auto ts = negative_logspace(floor, floor / 1000.0, 32);
  std::vector<double> slopes;
  slopes.reserve(ts.size());
  for (double t : ts) slopes.push_back(rp.chi_d1(t));
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i)
    if (slopes[i] > slopes[i + 1] * (1.0 + 1e-12) + 1e-300)
      throw EstimationError("chi' is not monotone on the far tail");
  if (slopes.front() <= 0.0) return 0.0;
  const double decay = tail_exponent([&rp](double t) { return rp.chi_d1(t); },
                                     {floor, floor / 1000.0}, QuadConfig{});
  if (decay < -1e-3) return 0.0;
  return std::pow(slopes.front(), rp.n());
}

bool in_full_mass_class(const RadialPotential& rp) { return pole_mass(rp) <= kPoleMassTol; }

EntropyVerdicts entropy_verdicts(const RadialPotential& rp, const QuadConfig& cfg) {
  if (!in_full_mass_class(rp)) {
    const IntegralVerdict v = atom_verdict(rp, cfg);
    return {v, v};
  }
  const int n = rp.n();
  const double log_norm = log_volume_factor(n);
  const auto bps = rp.breakpoints();

  const Integrand exact = [&rp, n, log_norm](double t) {
    const double m = density(rp, t);
    if (m <= 0.0) return 0.0;
    return m * (std::log(m) - log_norm - 2.0 * n * t);
  };
  const Integrand criterion = [&rp, n](double t) {
    const double d2 = rp.chi_d2(t);
    if (d2 <= 0.0) return 0.0;
    return -t * std::pow(rp.chi_d1(t), n - 1) * d2;
  };
  EntropyVerdicts out{integrate_halfline(exact, 0.0, cfg, bps),
                      integrate_halfline(criterion, 0.0, cfg, bps)};
  const auto a = out.exact.kind, b = out.criterion.kind;
  if (a != b && a != VerdictKind::Inconclusive && b != VerdictKind::Inconclusive)
    throw ConsistencyError("entropy: exact verdict " + to_string(a) + " but criterion " +
                           to_string(b) + " for " + rp.weight().describe());
  return out;
}

IntegralVerdict entropy(const RadialPotential& rp, const QuadConfig& cfg) {
  return entropy_verdicts(rp, cfg).exact;
}

IntegralVerdict energy(const RadialPotential& rp, double p, const QuadConfig& cfg) {
  if (!(p > 0.0)) throw InputError("energy exponent p must be positive");
  if (!in_full_mass_class(rp)) return atom_verdict(rp, cfg);
  const Integrand f = [&rp, p](double t) {
    const double m = density(rp, t);
    if (m <= 0.0) return 0.0;
    const double u = neg_part(rp.chi(t));
    return u == 0.0 ? 0.0 : std::pow(u, p) * m;
  };
  return integrate_halfline(f, 0.0, cfg, rp.breakpoints());
}

double critical_by_bisection(const std::function<VerdictKind(double)>& kind_at, double p_star) {
  constexpr double kLo = 0.05, kHi = 50.0;
  const VerdictKind at_hi = kind_at(kHi);
  if (at_hi == VerdictKind::Finite) return kInf;
  const VerdictKind at_lo = kind_at(kLo);
  if (at_lo == VerdictKind::Divergent)
    throw PreconditionError("energy diverges already at p = 0.05");
  if (at_lo == VerdictKind::Inconclusive || at_hi == VerdictKind::Inconclusive)
    throw EstimationError("critical exponent: end probes inconclusive");

  // The power-law root wins when the verdicts on either side agree with it.
  if (std::isfinite(p_star) && p_star > kLo && p_star < kHi &&
      kind_at(0.97 * p_star) != VerdictKind::Divergent && kind_at(1.03 * p_star) != VerdictKind::Finite)
    return p_star;

  // Last finite probe, then first divergent probe.
  double a = kLo, b = kHi;
  while (b - a > 1e-3) {
    const double mid = 0.5 * (a + b);
    (kind_at(mid) == VerdictKind::Finite ? a : b) = mid;
  }
  double c = a, d = kHi;
  while (d - c > 1e-3) {
    const double mid = 0.5 * (c + d);
    (kind_at(mid) == VerdictKind::Divergent ? d : c) = mid;
  }
  return 0.5 * (a + d);
}

namespace {

// Exponent of f at -inf from local octave slopes at |T|, |T|/4, |T|/16, with
// Aitken extrapolation of the slowly decaying corrections. NaN when f vanishes.
double asymptotic_exponent(const Integrand& f, double floor) {
  auto local = [&](double t) {
    const double a = f(t), b = f(0.5 * t);
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return std::nan("");
    return std::log(a / b) / std::log(2.0);
  };
  const double s2 = local(floor), s1 = local(floor / 4.0), s0 = local(floor / 16.0);
  if (std::isnan(s0) || std::isnan(s1) || std::isnan(s2)) return std::nan("");
  const double d_near = s1 - s0, d_far = s2 - s1;
  if (d_near == 0.0) return s2;
  const double r = d_far / d_near;
  if (!(r > 0.0 && r < 1.0)) return s2;
  return s2 + d_far * r / (1.0 - r);
}

}  // namespace

double power_tail_root(const Integrand& base, const Integrand& growth,
                       std::span<const double> breakpoints, const QuadConfig& cfg) {
  QuadConfig far = cfg;
  far.tail_window = {cfg.t_floor, std::max(cfg.tail_window.first, cfg.t_floor / 10.0)};
  if (!(far.tail_window.first < far.tail_window.second)) return std::nan("");
  const auto win = effective_window(far, breakpoints);
  // Superpolynomial behaviour has no power-law root.
  if (!std::isfinite(tail_exponent(base, win, cfg)) || !std::isfinite(tail_exponent(growth, win, cfg)))
    return std::nan("");
  const double beta = asymptotic_exponent(base, win.first);
  const double gamma = asymptotic_exponent(growth, win.first);
  if (!std::isfinite(beta) || !std::isfinite(gamma) || !(gamma > 0.0)) return std::nan("");
  return (-1.0 - beta) / gamma;
}

double critical_p(const RadialPotential& rp, const QuadConfig& cfg) {
  // The energy tail exponent is beta_m + p * gamma with beta_m the exponent of m
  // and gamma that of -chi.
  const double p_star =
      power_tail_root([&rp](double t) { return density(rp, t); },
                      [&rp](double t) { return neg_part(rp.chi(t)); }, rp.breakpoints(), cfg);
  return critical_by_bisection([&](double p) { return energy(rp, p, cfg).kind; }, p_star);
}

IntegralVerdict mt_integral_given_energy(const RadialPotential& rp, double p, double c,
                                         double energy_value, const QuadConfig& cfg) {
  if (!(p > 0.0) || !(c > 0.0)) throw InputError("mt_integral needs p > 0 and c > 0");
  if (!(energy_value > 0.0) || !std::isfinite(energy_value))
    throw PreconditionError("mt_integral: E_p must be finite and positive (non-constant potential)");
  const int n = rp.n();
  const double log_norm = log_volume_factor(n);
  const double coef = c * std::pow(energy_value, -1.0 / n);
  const double power = 1.0 + p / n;
  const Integrand log_f = [&rp, n, log_norm, coef, power](double t) {
    return log_norm + 2.0 * n * t + coef * std::pow(neg_part(rp.chi(t)), power);
  };
  return integrate_halfline_log(log_f, 0.0, cfg, rp.breakpoints());
}

IntegralVerdict mt_integral(const RadialPotential& rp, double p, double c, const QuadConfig& cfg) {
  const IntegralVerdict e = energy(rp, p, cfg);
  if (!e.finite()) throw PreconditionError("mt_integral: energy is " + to_string(e.kind));
  return mt_integral_given_energy(rp, p, c, e.value, cfg);
}

IntegralVerdict exp_moment(const RadialPotential& rp, double k, const QuadConfig& cfg) {
  if (!(k > 0.0)) throw InputError("exp_moment needs k > 0");
  const int n = rp.n();
  const double log_norm = log_volume_factor(n);
  const Integrand log_f = [&rp, n, k, log_norm](double t) {
    return log_norm + 2.0 * n * t - k * rp.chi(t);
  };
  return integrate_halfline_log(log_f, 0.0, cfg, rp.breakpoints());
}

double sublevel_radius_log(const RadialPotential& rp, double s) {
  if (rp.model() != Model::Ball) throw PreconditionError("sublevel sets need the Ball model");
  if (!(s > 0.0)) throw DomainError("sublevel level s must be positive");
  double lo = rp.t_floor(), hi = 0.0;
  const double target = -s;
  const double at_lo = rp.chi(lo);
  if (!(at_lo < target))
    throw DomainError("level s=" + std::to_string(s) + " not reached above t_floor");
  if (!(rp.chi(hi) > target)) throw DomainError("level s must be positive");
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    mid = 0.5 * (lo + hi);
    const double v = rp.chi(mid);
    if (std::abs(v - target) <= 1e-10 || hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) break;
    (v < target ? lo : hi) = mid;
  }
  if (!(rp.chi(lo) <= rp.chi(hi))) throw EstimationError("chi not monotone on the sublevel bracket");
  return mid;
}

double capacity_sublevel(const RadialPotential& rp, double s) {
  const double ts = sublevel_radius_log(rp, s);
  return std::pow(-ts, -static_cast<double>(rp.n()));
}

double volume_sublevel(const RadialPotential& rp, double s) {
  const double ts = sublevel_radius_log(rp, s);
  return unit_ball_volume(rp.n()) * std::exp(2.0 * rp.n() * ts);
}

IntegralVerdict dp_proxy(const RadialPotential& a, const RadialPotential& b, double p,
                         const QuadConfig& cfg) {
  if (a.n() != b.n() || a.model() != b.model())
    throw InputError("dp_proxy needs potentials of the same dimension and model");
  if (!(p > 0.0)) throw InputError("dp_proxy needs p > 0");
  if (!in_full_mass_class(a) || !in_full_mass_class(b))
    throw PreconditionError("dp_proxy: both potentials need finite energy");
  const Integrand f = [&a, &b, p](double t) {
    const double m = density(a, t) + density(b, t);
    if (m <= 0.0) return 0.0;
    const double gap = std::abs(a.chi(t) - b.chi(t));
    return gap == 0.0 ? 0.0 : std::pow(gap, p) * m;
  };
  return integrate_halfline(f, 0.0, cfg, merged_breakpoints(a, b));
}

bool floor_bounded(const Weight& w, double tol) {
  const double t = w.t_floor();
  const double far = w.value(t);
  const double half = w.value(0.5 * t);
  if (!std::isfinite(far)) return false;
  return std::abs(far - half) <= tol * std::max(1.0, std::abs(far));
}

}  // namespace pshlab
