#include "pshlab/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pshlab/errors.hpp"

namespace pshlab {

namespace {

// Lower convex hull (monotone chain); returns vertex indices left to right.
std::vector<std::size_t> lower_hull(const GridFunction& g) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < g.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t o = h[h.size() - 2], a = h.back();
      const double cross = (g.ts[a] - g.ts[o]) * (g.vals[i] - g.vals[o]) -
                           (g.vals[a] - g.vals[o]) * (g.ts[i] - g.ts[o]);
      if (cross > 0.0) break;
      h.pop_back();
    }
    h.push_back(i);
  }
  return h;
}

struct HullEnvelope {
  std::vector<double> env;
  std::vector<double> ma;
};

// Hull values, flattened to the left of the leftmost hull minimiser. Mass sits
// on the hull vertices and uses the segment slopes, so collinear nodes carry none.
HullEnvelope hull_envelope(const GridFunction& g, int n) {
  const auto hull = lower_hull(g);
  std::size_t argmin = 0;  // position in hull
  for (std::size_t k = 1; k < hull.size(); ++k)
    if (g.vals[hull[k]] < g.vals[hull[argmin]]) argmin = k;

  HullEnvelope out{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
  auto& env = out.env;
  const std::size_t flat_end = hull[argmin];
  const double floor_value = g.vals[flat_end];
  for (std::size_t i = 0; i <= flat_end; ++i) env[i] = floor_value;
  double left = 0.0;
  for (std::size_t k = argmin; k + 1 < hull.size(); ++k) {
    const std::size_t a = hull[k], b = hull[k + 1];
    const double slope = (g.vals[b] - g.vals[a]) / (g.ts[b] - g.ts[a]);
    env[a] = g.vals[a];
    for (std::size_t i = a + 1; i < b; ++i) env[i] = g.vals[a] + slope * (g.ts[i] - g.ts[a]);
    env[b] = g.vals[b];
    if (a > 0) {
      const double weight = n == 1 ? 1.0 : n * std::pow(std::max(left, 0.0), n - 1);
      out.ma[a] = std::max(0.0, weight * (slope - left));
    }
    left = slope;
  }
  return out;
}

// Convex and nondecreasing up to rounding in the secant slopes; such input is
// its own envelope, which makes the construction exactly idempotent.
bool admissible(const GridFunction& g) {
  constexpr double kEps = 64.0 * std::numeric_limits<double>::epsilon();
  const auto& t = g.ts;
  const auto& v = g.vals;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double dt = t[i + 1] - t[i];
    const double s = (v[i + 1] - v[i]) / dt;
    const double noise = kEps * (std::abs(v[i]) + std::abs(v[i + 1])) / dt;
    const double lower = i == 0 ? 0.0 : prev;
    if (s < lower - noise - kEps * std::abs(lower)) return false;
    prev = std::max(prev, s);
  }
  return true;
}

}  // namespace

double EnvelopeResult::total_ma() const {
  double s = 0.0;
  for (double m : discrete_ma) s += m;
  return s;
}

double EnvelopeResult::off_contact_ma() const {
  double s = 0.0;
  for (std::size_t i = 0; i < discrete_ma.size(); ++i)
    if (!contact[i]) s += discrete_ma[i];
  return s;
}

EnvelopeResult convex_increasing_minorant(const GridFunction& g, int n) {
  g.validate();
  if (n < 1) throw InputError("envelope dimension must be >= 1");
  const std::size_t size = g.size();
  EnvelopeResult out;
  out.n = n;
  out.discrete_ma.assign(size, 0.0);
  if (admissible(g)) {
    out.env = g;
    const auto& e = out.env.vals;
    const auto& t = out.env.ts;
    for (std::size_t i = 1; i + 1 < size; ++i) {
      const double sl = (e[i] - e[i - 1]) / (t[i] - t[i - 1]);
      const double sr = (e[i + 1] - e[i]) / (t[i + 1] - t[i]);
      const double weight = n == 1 ? 1.0 : n * std::pow(std::max(sl, 0.0), n - 1);
      out.discrete_ma[i] = std::max(0.0, weight * (sr - sl));
    }
  } else {
    HullEnvelope h = hull_envelope(g, n);
    out.env.ts = g.ts;
    out.env.vals = std::move(h.env);
    out.discrete_ma = std::move(h.ma);
  }

  out.contact.resize(size);
  for (std::size_t i = 0; i < size; ++i)
    out.contact[i] = std::abs(out.env.vals[i] - g.vals[i]) <= 1e-10 * (1.0 + std::abs(g.vals[i]));
  return out;
}

GridFunction compose_power(const RadialPotential& rp, double q, const std::vector<double>& ts) {
  if (!(q > 1.0)) throw InputError("compose_power needs q > 1");
  GridFunction g;
  g.ts = ts;
  g.vals.reserve(ts.size());
  for (double t : ts) {
    if (t > 0.0) throw DomainError("compose_power grid must lie in t <= 0");
    const double chi = rp.chi(t);
    if (chi > 0.0) throw PoleError("-(-chi)^q undefined: chi(" + std::to_string(t) + ") > 0");
    g.vals.push_back(-std::pow(-chi, q));
  }
  g.validate();
  return g;
}

EnvelopePowerResult envelope_power(const RadialPotential& rp, double q, const EnvelopeGrid& grid) {
  if (!(grid.t_lo < grid.t_hi && grid.t_hi < 0.0) || grid.nodes < 3)
    throw InputError("envelope grid needs t_lo < t_hi < 0 and at least 3 nodes");
  EnvelopePowerResult out;
  std::vector<double> extents, logs;
  for (double scale : {1.0, 10.0, 100.0}) {
    const auto ts = negative_logspace(grid.t_lo * scale, grid.t_hi, grid.nodes);
    EnvelopeResult r = convex_increasing_minorant(compose_power(rp, q, ts), rp.n());
    const double slope = (r.env.vals[1] - r.env.vals[0]) / (r.env.ts[1] - r.env.ts[0]);
    out.left_slopes.push_back(slope);
    if (scale == 1.0) out.envelope = std::move(r);
    extents.push_back(std::log(-grid.t_lo * scale));
    logs.push_back(slope > 0.0 ? std::log(slope) : -700.0);
  }
  const double mx = (extents[0] + extents[1] + extents[2]) / 3.0;
  const double my = (logs[0] + logs[1] + logs[2]) / 3.0;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxx += (extents[i] - mx) * (extents[i] - mx);
    sxy += (extents[i] - mx) * (logs[i] - my);
  }
  out.slope_decay = sxy / sxx;
  const double base_pole = std::pow(std::max(out.left_slopes[0], 0.0), rp.n());
  out.full_mass = base_pole <= 1e-4 || out.slope_decay < -0.05;
  return out;
}

}  // namespace pshlab
