#include "pshlab/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "pshlab/errors.hpp"
#include "pshlab/grid_function.hpp"

namespace pshlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
// Odd indices of kXgk are the Gauss nodes.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208067107124, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                           0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                           0.295524224714752870173892994651338};

struct Panel {
  double a, b;
  double val;
  double abs_val;
  double err;
};

double sample(const Integrand& f, double t) {
  const double y = f(t);
  if (!std::isfinite(y)) throw EvaluationError("non-finite integrand sample", t);
  return y;
}

Panel gk21(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = sample(f, c);
  double resk = fc * kWgk[10];
  double resg = 0.0;
  double resabs = std::abs(fc) * kWgk[10];
  for (int j = 0; j < 10; ++j) {
    const double x = h * kXgk[j];
    const double f1 = sample(f, c - x);
    const double f2 = sample(f, c + x);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, resk * h, resabs * std::abs(h), std::abs((resk - resg) * h)};
}

struct Adaptive {
  std::vector<Panel> panels;
  double err = 0.0;
  double abs_total = 0.0;
  bool converged = true;
};

Adaptive adapt(const Integrand& f, const std::vector<double>& edges, double rel_tol,
               int max_subdivisions) {
  Adaptive out;
  out.panels.reserve(edges.size() + 64);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    out.panels.push_back(gk21(f, edges[i], edges[i + 1]));

  auto by_err = [&](std::size_t x, std::size_t y) { return out.panels[x].err < out.panels[y].err; };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_err)> heap(by_err);
  for (std::size_t i = 0; i < out.panels.size(); ++i) heap.push(i);

  auto totals = [&](double& val, double& err, double& absval) {
    val = err = absval = 0.0;
    for (const Panel& p : out.panels) {
      val += p.val;
      err += p.err;
      absval += p.abs_val;
    }
  };

  double val = 0.0, err = 0.0, absval = 0.0;
  totals(val, err, absval);
  int splits = 0;
  while (!heap.empty()) {
    const double tol = std::max({rel_tol * std::abs(val), 1e-13 * absval, 1e-300});
    if (err <= tol) break;
    if (splits >= max_subdivisions) {
      out.converged = false;
      break;
    }
    const std::size_t worst = heap.top();
    heap.pop();
    const Panel p = out.panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 1e-13 * std::max(1.0, std::abs(p.a))) {
      // Cannot resolve further; park it.
      out.panels[worst].err = 0.0;
      err -= p.err;
      continue;
    }
    const Panel left = gk21(f, p.a, mid);
    const Panel right = gk21(f, mid, p.b);
    out.panels[worst] = left;
    out.panels.push_back(right);
    heap.push(worst);
    heap.push(out.panels.size() - 1);
    val += left.val + right.val - p.val;
    err += left.err + right.err - p.err;
    absval += left.abs_val + right.abs_val - p.abs_val;
    if (++splits % 256 == 0) totals(val, err, absval);
  }
  totals(val, err, absval);
  out.err = err;
  out.abs_total = absval;
  return out;
}

// Partial sum over the panels lying in [from, upper].
double partial_sum(const Adaptive& ad, double from) {
  double s = 0.0;
  for (const Panel& p : ad.panels)
    if (p.a >= from) s += p.val;
  return s;
}

std::vector<double> initial_edges(double floor, double upper, std::span<const double> bps) {
  std::vector<double> e{floor, upper};
  auto add = [&](double x) {
    if (x > floor && x < upper) e.push_back(x);
  };
  for (int k = 0; k < 1100; ++k) {
    const double x = -std::ldexp(1.0, k);
    if (x <= floor) break;
    add(x);
  }
  for (double frac : {0.5, 0.25, 0.125}) add(-frac);
  for (int k = 1; k <= 8; ++k) add(std::ldexp(floor, -k));
  for (double b : bps) {
    add(b);
    const double reach = std::max(8.0, 0.25 * std::abs(b));
    for (int k = -3; k < 1100; ++k) {
      const double d = std::ldexp(1.0, k);
      if (d > reach) break;
      add(b - d);
      add(b + d);
    }
  }
  std::sort(e.begin(), e.end());
  std::vector<double> out;
  for (double x : e)
    if (out.empty() || x - out.back() > 1e-12 * (1.0 + std::abs(x))) out.push_back(x);
  if (out.back() != upper) out.back() = upper;
  return out;
}

struct TailSamples {
  std::vector<double> t;
  std::vector<double> y;  // log|f|
  bool zero_prefix = false;
  bool zeros_elsewhere = false;
};

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, double* rss) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - (my + slope * (x[i] - mx));
    r += d * d;
  }
  if (rss) *rss = r;
  return slope;
}

double tail_exponent_impl(const Integrand& log_mag, std::pair<double, double> window) {
  const auto [lo, hi] = window;
  if (!(lo < hi && hi < 0.0)) throw InputError("tail window must satisfy lo < hi < 0");
  constexpr int kSamples = 64;
  const auto ts = negative_logspace(lo, hi, kSamples);
  std::vector<double> lx, tx, ys;
  bool seen_positive = false;
  bool zero_prefix = false;
  bool zero_inside = false;
  for (double t : ts) {
    const double y = log_mag(t);
    if (std::isnan(y) || y == kInf) throw EvaluationError("non-finite tail sample", t);
    if (y == -kInf) {
      (seen_positive ? zero_inside : zero_prefix) = true;
      continue;
    }
    seen_positive = true;
    lx.push_back(std::log(-t));
    tx.push_back(t);
    ys.push_back(y);
  }
  if (!seen_positive) return -kInf;
  if (zero_prefix && !zero_inside) return -kInf;  // underflow towards -inf
  if (ys.size() < 8) throw EstimationError("fewer than 8 usable samples in the tail window");

  double rss_pow = 0.0, rss_exp = 0.0;
  const double beta = fit_slope(lx, ys, &rss_pow);
  const double rate = fit_slope(tx, ys, &rss_exp);
  const double noise = 1e-12 * static_cast<double>(ys.size());
  if (rss_pow > 10.0 * rss_exp && rss_pow > noise) return rate > 0.0 ? -kInf : kInf;
  return beta;
}

Integrand log_abs(const Integrand& f) {
  return [&f](double t) {
    const double y = f(t);
    if (!std::isfinite(y)) return std::numeric_limits<double>::quiet_NaN();
    return y == 0.0 ? -kInf : std::log(std::abs(y));
  };
}

// Octave contributions of a power tail form a sum of geometric sequences (the
// leading power plus lower-order corrections). Wynn's epsilon on five octave
// partial sums removes the two slowest components; Aitken is the fallback.
double extrapolated(const Adaptive& ad, double floor) {
  constexpr int kTerms = 5;
  std::array<double, kTerms> s{};
  for (int k = 0; k < kTerms; ++k) s[k] = partial_sum(ad, std::ldexp(floor, -(kTerms - 1 - k)));
  auto aitken = [&] {
    const double d_far = s[4] - s[3];
    const double d_near = s[3] - s[2];
    if (d_near == 0.0) return s[4];
    const double r = d_far / d_near;
    if (!(r > 0.0 && r < 1.0)) return s[4];
    return s[4] + d_far * r / (1.0 - r);
  };
  std::array<double, kTerms> prev{}, cur = s;
  for (int col = 1; col < kTerms; ++col) {
    std::array<double, kTerms> next{};
    for (int i = 0; i + col < kTerms; ++i) {
      const double d = cur[i + 1] - cur[i];
      // An even column holds estimates; once they agree to roundoff it has converged.
      const bool even = (col - 1) % 2 == 0;
      if (even && col > 1 &&
          std::abs(d) <= 1e-13 * std::max(std::abs(cur[i]), std::abs(cur[i + 1])))
        return cur[kTerms - col];
      if (d == 0.0 || !std::isfinite(d)) return aitken();
      next[i] = prev[i + 1] + 1.0 / d;
    }
    prev = cur;
    cur = next;
  }
  const double est = cur[0];
  // Reject estimates that leave the monotone tail direction.
  const double step = s[4] - s[3];
  if (!std::isfinite(est) || (est - s[4]) * step < 0.0 ||
      std::abs(est - s[4]) > 100.0 * std::abs(aitken() - s[4]) + 1e-300)
    return aitken();
  return est;
}

IntegralVerdict run(const Integrand& f, const Integrand& log_mag, double upper,
                    const QuadConfig& cfg, std::span<const double> bps, double log_scale) {
  cfg.validate();
  const double floor = cfg.t_floor;
  if (!(upper > floor)) throw InputError("upper limit must lie above t_floor");

  IntegralVerdict v;
  const auto window = effective_window(cfg, bps);
  v.tail_exponent = tail_exponent_impl(log_mag, window);
  VerdictKind kind = classify_exponent(v.tail_exponent, cfg.delta_margin);
  // Slowly varying corrections can bias the window fit; the local slope over the
  // last decades above the floor has to agree with it.
  bool drifts = false;
  if (std::isfinite(v.tail_exponent) && kind != VerdictKind::Inconclusive) {
    const double y_far = log_mag(floor), y_near = log_mag(floor / 8.0);
    if (std::isfinite(y_far) && std::isfinite(y_near)) {
      const double local = (y_far - y_near) / std::log(8.0);
      drifts = classify_exponent(local, cfg.delta_margin) != kind;
    }
  }

  const Adaptive ad = adapt(f, initial_edges(floor, upper, bps), cfg.rel_tol, cfg.max_subdivisions);
  const bool summable_power = std::isfinite(v.tail_exponent) && v.tail_exponent < -1.0;
  double value_full = partial_sum(ad, floor);
  double value_half = partial_sum(ad, 0.5 * floor);
  if (summable_power) {
    value_full = extrapolated(ad, floor);
    value_half = extrapolated(ad, 0.5 * floor);
  }
  const double diff = std::abs(value_full - value_half);
  const double denom = std::max({std::abs(value_full), 1e-12 * ad.abs_total, 1e-300});
  v.floor_sensitivity = diff == 0.0 ? 0.0 : diff / denom;
  v.value = value_full;
  v.abs_err = ad.err + diff;

  if (!ad.converged) {
    kind = VerdictKind::Inconclusive;
    v.note = "subdivision budget exhausted";
  } else if (kind == VerdictKind::Finite && v.floor_sensitivity > cfg.floor_tol) {
    kind = VerdictKind::Inconclusive;
    v.note = "floor sensitivity above tolerance";
  } else if (drifts) {
    kind = VerdictKind::Inconclusive;
    v.note = "tail exponent drifts between the window and the floor";
  } else if (kind == VerdictKind::Inconclusive) {
    v.note = "tail exponent inside the critical band";
  }
  v.kind = kind;

  if (v.value > 0.0) {
    v.log_value = log_scale + std::log(v.value);
  } else {
    v.log_value = -kInf;
  }
  if (log_scale != 0.0) {
    v.value = std::exp(v.log_value);
    v.abs_err = v.abs_err * std::exp(log_scale);
  }
  return v;
}

}  // namespace

void QuadConfig::validate() const {
  if (!(rel_tol > 0.0)) throw InputError("rel_tol must be positive");
  if (!(t_floor < 0.0) || !std::isfinite(t_floor)) throw InputError("t_floor must be negative");
  if (!(tail_window.first < tail_window.second && tail_window.second < 0.0))
    throw InputError("tail window must be ordered and negative");
  if (tail_window.first < t_floor) throw InputError("tail window must lie above t_floor");
  if (!(delta_margin > 0.0)) throw InputError("delta_margin must be positive");
  if (max_subdivisions <= 0) throw InputError("max_subdivisions must be positive");
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Finite:
      return "Finite";
    case VerdictKind::Divergent:
      return "Divergent";
    case VerdictKind::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

VerdictKind classify_exponent(double beta, double delta_margin) {
  if (beta < -1.0 - delta_margin) return VerdictKind::Finite;
  if (beta > -1.0 + delta_margin) return VerdictKind::Divergent;
  return VerdictKind::Inconclusive;
}

std::pair<double, double> effective_window(const QuadConfig& cfg, std::span<const double> bps) {
  auto [lo, hi] = cfg.tail_window;
  if (bps.empty()) return {lo, hi};
  const double bmin = *std::min_element(bps.begin(), bps.end());
  hi = std::min(hi, bmin - std::max(64.0, std::abs(bmin)));
  lo = std::max(cfg.t_floor, std::min(lo, 10.0 * hi));
  if (!(lo < hi)) {
    lo = cfg.t_floor;
    hi = 0.5 * cfg.t_floor;
  }
  return {lo, hi};
}

double tail_exponent(const Integrand& f, std::pair<double, double> window, const QuadConfig&) {
  return tail_exponent_impl(log_abs(f), window);
}

double tail_exponent_log(const Integrand& log_f, std::pair<double, double> window,
                         const QuadConfig&) {
  return tail_exponent_impl(log_f, window);
}

IntegralVerdict integrate_halfline(const Integrand& f, double upper, const QuadConfig& cfg,
                                   std::span<const double> breakpoints) {
  return run(f, log_abs(f), upper, cfg, breakpoints, 0.0);
}

IntegralVerdict integrate_halfline_log(const Integrand& log_f, double upper, const QuadConfig& cfg,
                                       std::span<const double> breakpoints) {
  cfg.validate();
  // Scale by the largest sampled value so the exponentiated integrand stays representable.
  std::vector<double> probe = initial_edges(cfg.t_floor, upper, breakpoints);
  {
    const auto dense = negative_logspace(cfg.t_floor, std::min(upper, -1e-3) - 1e-12, 512);
    probe.insert(probe.end(), dense.begin(), dense.end());
    const double near_lo = std::max(cfg.t_floor, -64.0);
    if (near_lo < upper) {
      const auto lin = linspace(near_lo, upper, 512);
      probe.insert(probe.end(), lin.begin(), lin.end());
    }
  }
  double peak = -kInf;
  for (double t : probe) {
    const double y = log_f(t);
    if (std::isnan(y) || y == kInf) throw EvaluationError("non-finite log-integrand sample", t);
    peak = std::max(peak, y);
  }
  if (peak == -kInf) peak = 0.0;
  const Integrand scaled = [&log_f, peak](double t) {
    const double y = log_f(t);
    return y == -kInf ? 0.0 : std::exp(y - peak);
  };
  return run(scaled, log_f, upper, cfg, breakpoints, peak);
}

double integrate_interval(const Integrand& f, double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> edges = linspace(lo, hi, 9);
  const Adaptive ad = adapt(f, edges, rel_tol, 20000);
  double s = partial_sum(ad, lo);
  return a < b ? s : -s;
}

}  // namespace pshlab
