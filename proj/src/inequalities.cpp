#include "pshlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pshlab/errors.hpp"

namespace pshlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool holds(double lhs, double rhs) {
  const double margin = rhs - lhs;
  if (std::isnan(margin)) return lhs == rhs;  // inf <= inf
  return margin >= -1e-9 * (1.0 + std::abs(rhs));
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
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
  return sxy / sxx;
}

Params base_params(const RadialPotential& rp, double p) {
  return {{"weight", rp.weight().describe()}, {"n", double(rp.n())}, {"p", p}};
}

Params with(Params base, std::string key, ParamValue value) {
  base.emplace_back(std::move(key), std::move(value));
  return base;
}

}  // namespace

std::string to_string(ReportVerdict v) {
  switch (v) {
    case ReportVerdict::Holds: return "Holds";
    case ReportVerdict::Violated: return "Violated";
    case ReportVerdict::Skipped: return "Skipped";
  }
  return "?";
}

InequalityReport make_report(std::string name, Params params, double lhs, double rhs) {
  InequalityReport r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.verdict = holds(lhs, rhs) ? ReportVerdict::Holds : ReportVerdict::Violated;
  return r;
}

InequalityReport skipped_report(std::string name, Params params, std::string reason) {
  InequalityReport r;
  r.name = std::move(name);
  r.params = std::move(params);
  r.verdict = ReportVerdict::Skipped;
  r.reason = std::move(reason);
  return r;
}

InequalityReport finiteness_report(std::string name, Params params, const IntegralVerdict& v) {
  InequalityReport r = make_report(std::move(name), std::move(params), v.tail_exponent, -1.0);
  if (v.kind == VerdictKind::Inconclusive) {
    r.verdict = ReportVerdict::Skipped;
    r.reason = v.note.empty() ? "inconclusive" : v.note;
  } else {
    r.verdict = v.finite() ? ReportVerdict::Holds : ReportVerdict::Violated;
    if (!v.finite()) r.reason = "integral diverges";
  }
  r.quad = v;
  return r;
}

InequalityReport expectation_report(std::string name, Params params, const IntegralVerdict& v,
                                    bool expect_finite) {
  params.emplace_back("expected", expect_finite ? "Finite" : "Divergent");
  InequalityReport r = expect_finite ? make_report(std::move(name), std::move(params), v.tail_exponent, -1.0)
                                     : make_report(std::move(name), std::move(params), -1.0, v.tail_exponent);
  const bool match = v.finite() == expect_finite;
  if (v.kind == VerdictKind::Inconclusive) {
    r.verdict = ReportVerdict::Skipped;
    r.reason = v.note.empty() ? "inconclusive" : v.note;
  } else {
    r.verdict = match ? ReportVerdict::Holds : ReportVerdict::Violated;
    if (!match) r.reason = "observed " + to_string(v.kind);
  }
  r.quad = v;
  return r;
}

InequalityReport young_pair(double s, double t) {
  Params params{{"s", s}, {"t", t}};
  if (!(s >= 0.0) || !(t >= 0.0)) throw InputError("young_pair needs s, t >= 0");
  if (t > 700.0) return skipped_report("young", std::move(params), "e^t overflows for t > 700");
  const double lhs = s * t;
  const double rhs = (s + 1.0) * std::log1p(s) - s + (std::expm1(t) - t);
  return make_report("young", std::move(params), lhs, rhs);
}

std::vector<InequalityReport> young_suite(int size, int probes, std::uint64_t seed) {
  if (size < 2 || probes < 0) throw InputError("young_suite needs size >= 2 and probes >= 0");
  std::vector<double> axis(size);
  const double lo = std::log(1e-3), hi = std::log(20.0);
  for (int i = 0; i < size; ++i) axis[i] = std::exp(lo + (hi - lo) * (i + 1) / size);
  std::vector<InequalityReport> out;
  out.reserve(size * size + probes);
  for (double s : axis)
    for (double t : axis) out.push_back(young_pair(s, t));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  for (int i = 0; i < probes; ++i) {
    const double s = std::exp(unif(rng));
    const double t = std::log1p(s);
    const InequalityReport y = young_pair(s, t);
    out.push_back(make_report("young_equality", {{"s", s}, {"t", t}, {"seed", double(seed)}},
                              std::abs(y.margin), 1e-9));
  }
  return out;
}

double mt_bound(int n, double p) { return 2.0 * n * (n + 1.0) / (n + p); }

std::vector<double> default_mt_grid(int n, double p) {
  std::vector<double> g;
  for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0 * mt_bound(n, p));
  return g;
}

double mt_threshold(const RadialPotential& rp, double p, double energy_value,
                    const std::vector<double>& c_grid, const QuadConfig& cfg) {
  auto finite_at = [&](double c) {
    return mt_integral_given_energy(rp, p, c, energy_value, cfg).kind == VerdictKind::Finite;
  };
  std::vector<double> grid = c_grid;
  std::sort(grid.begin(), grid.end());
  double lo = 0.0, hi = kInf;
  for (double c : grid) {
    if (c <= 0.0) continue;
    if (finite_at(c)) {
      if (hi == kInf) lo = c;
    } else if (hi == kInf) {
      hi = c;
    }
  }
  const double cap = 64.0 * mt_bound(rp.n(), p);
  if (hi == kInf) {
    double c = std::max(lo, mt_bound(rp.n(), p));
    while (true) {
      c *= 2.0;
      if (c > cap) return finite_at(cap) ? kInf : std::max(lo, 0.5 * c);
      if (finite_at(c)) {
        lo = c;
      } else {
        hi = c;
        break;
      }
    }
  }
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (finite_at(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<InequalityReport> check_mt(const RadialPotential& rp, double p,
                                       const std::vector<double>& c_grid, const QuadConfig& cfg) {
  const Params base = base_params(rp, p);
  const IntegralVerdict e = energy(rp, p, cfg);
  std::vector<InequalityReport> out;
  if (e.kind == VerdictKind::Divergent) throw PreconditionError("check_mt: E_p diverges");
  if (e.kind == VerdictKind::Inconclusive || !(e.value > 0.0)) {
    const std::string why = e.kind == VerdictKind::Inconclusive ? "energy inconclusive"
                                                                : "constant potential (E_p = 0)";
    for (double c : c_grid) out.push_back(skipped_report("mt", with(base, "c", c), why));
    out.push_back(skipped_report("mt_range", base, why));
    return out;
  }
  const double bound = mt_bound(rp.n(), p);
  const double c_star = mt_threshold(rp, p, e.value, c_grid, cfg);
  for (double c : c_grid) {
    const IntegralVerdict v = mt_integral_given_energy(rp, p, c, e.value, cfg);
    InequalityReport r = make_report("mt", with(base, "c", c), c, c_star);
    if (v.kind == VerdictKind::Finite) {
      r.verdict = ReportVerdict::Holds;
    } else if (v.kind == VerdictKind::Inconclusive) {
      r.verdict = ReportVerdict::Skipped;
      r.reason = v.note;
    } else if (c > 0.9 * bound) {
      r.verdict = ReportVerdict::Skipped;
      r.reason = "diverges outside the guaranteed range";
    } else {
      r.verdict = ReportVerdict::Violated;
      r.reason = "diverges inside the guaranteed range";
    }
    r.quad = v;
    out.push_back(std::move(r));
  }
  InequalityReport range = make_report("mt_range", base, 0.9 * bound, c_star);
  range.quad = e;
  out.push_back(std::move(range));
  return out;
}

double aubin_constant(int n, double p, double c) {
  const double np = n / p;
  return p * std::pow(n, np) / (std::pow(c, np) * std::pow(n + p, 1.0 + np));
}

std::vector<InequalityReport> check_aubin(const RadialPotential& rp, double p,
                                          const std::vector<double>& k_list, const QuadConfig& cfg) {
  const Params base = base_params(rp, p);
  std::vector<InequalityReport> out;
  auto skip_all = [&](const std::string& why) {
    for (double k : k_list) out.push_back(skipped_report("aubin", with(base, "k", k), why));
    out.push_back(skipped_report("aubin_slope", base, why));
    return out;
  };
  const IntegralVerdict e = energy(rp, p, cfg);
  if (e.kind == VerdictKind::Divergent) throw PreconditionError("check_aubin: E_p diverges");
  if (!e.finite() || !(e.value > 0.0)) return skip_all("energy not finite and positive");

  double c = 0.0, log_b = 0.0;
  for (double cand : default_mt_grid(rp.n(), p)) {
    const IntegralVerdict v = mt_integral_given_energy(rp, p, cand, e.value, cfg);
    if (v.finite()) {
      c = cand;
      log_b = v.log_value;
    }
  }
  if (c == 0.0) return skip_all("no verified Moser-Trudinger constant");

  const double a = aubin_constant(rp.n(), p, c);
  const double growth = 1.0 + rp.n() / p;
  std::vector<double> xs, ys;
  for (double k : k_list) {
    Params params = with(with(with(base, "k", k), "c", c), "B", log_b);
    if (!(k > 0.0)) {
      out.push_back(skipped_report("aubin", std::move(params), "k must be positive"));
      continue;
    }
    const IntegralVerdict m = exp_moment(rp, k, cfg);
    const double rhs = a * std::pow(k, growth) * std::pow(e.value, 1.0 / p) + log_b;
    InequalityReport r = make_report("aubin", std::move(params),
                                     m.kind == VerdictKind::Divergent ? kInf : m.log_value, rhs);
    if (m.kind == VerdictKind::Inconclusive) {
      r.verdict = ReportVerdict::Skipped;
      r.reason = m.note;
    }
    r.quad = m;
    if (m.finite() && m.log_value > 0.0) {
      xs.push_back(std::log(k));
      ys.push_back(std::log(m.log_value));
    }
    out.push_back(std::move(r));
  }
  const bool spread = xs.size() >= 2 && *std::min_element(xs.begin(), xs.end()) <
                                             *std::max_element(xs.begin(), xs.end());
  if (!spread)
    out.push_back(skipped_report("aubin_slope", base, "fewer than 2 usable k"));
  else
    out.push_back(make_report("aubin_slope", base, ols_slope(xs, ys), growth + 0.1));
  return out;
}

std::vector<InequalityReport> check_capacity_energy(const RadialPotential& rp, double p,
                                                    const std::vector<double>& s_list,
                                                    const QuadConfig& cfg) {
  if (rp.model() != Model::Ball) throw PreconditionError("capacity needs the Ball model");
  const Params base = base_params(rp, p);
  std::vector<InequalityReport> out;
  if (!floor_bounded(rp.weight())) {
    for (double s : s_list)
      out.push_back(skipped_report("capacity_energy", with(base, "s", s),
                                   "not in the bounded model class"));
    return out;
  }
  const IntegralVerdict e = energy(rp, p, cfg);
  const int n = rp.n();
  const double q = (n + p) / (n + 1.0);
  for (double s : s_list) {
    if (!(s > 0.0)) throw InputError("capacity levels must be positive");
    if (!e.finite()) {
      out.push_back(skipped_report("capacity_energy", with(base, "s", s), "energy not finite"));
      continue;
    }
    double cap = 0.0;  // empty sublevel set
    try {
      cap = capacity_sublevel(rp, s);
    } catch (const DomainError&) {
    }
    InequalityReport r = make_report("capacity_energy", with(base, "s", s),
                                     std::pow(s, n + p) * cap, std::pow(q, n) * e.value);
    r.quad = e;
    out.push_back(std::move(r));
  }
  return out;
}

InequalityReport check_volume_capacity(const RadialPotential& rp, double beta,
                                       const std::vector<double>& s_list) {
  const int n = rp.n();
  Params params{{"weight", rp.weight().describe()}, {"n", double(n)}, {"beta", beta}};
  if (!(beta < 2.0 * n)) return skipped_report("volume_capacity", std::move(params), "needs beta < 2n");
  if (rp.model() != Model::Ball) throw PreconditionError("volume-capacity needs the Ball model");
  if (s_list.size() < 4) throw InputError("volume-capacity needs at least 4 levels");
  std::vector<double> m;
  for (double s : s_list) {
    double val = 0.0;  // empty sublevel set
    try {
      const double ts = sublevel_radius_log(rp, s);
      val = unit_ball_volume(n) * std::exp(2.0 * n * ts - beta * ts);
    } catch (const DomainError&) {
    }
    m.push_back(val);
  }
  const std::size_t quart = std::max<std::size_t>(1, m.size() / 4);
  const double first = *std::max_element(m.begin(), m.begin() + quart);
  const double last = *std::max_element(m.end() - quart, m.end());
  params.emplace_back("M", *std::max_element(m.begin(), m.end()));
  return make_report("volume_capacity", std::move(params), last, 1.1 * first);
}

Weight noncompact_member(int n, int j) {
  const double eps = std::ldexp(1.0, -j);
  return Weight::translated_scaled(Weight::softplus(), eps, std::pow(eps, -n));
}

std::vector<InequalityReport> noncompact_scaling(int n, double p, const std::vector<int>& j_list,
                                                 const QuadConfig& cfg) {
  if (j_list.empty()) throw EstimationError("noncompact_scaling: no members");
  const int j_max = *std::max_element(j_list.begin(), j_list.end());
  QuadConfig wide = cfg;
  wide.t_floor = std::min(cfg.t_floor, -4.0 * std::ldexp(1.0, j_max * n));
  const RadialPotential zero(Weight::zero().with_floor(wide.t_floor), n);

  const Params base{{"n", double(n)}, {"p", p}};
  std::vector<InequalityReport> out;
  std::vector<double> log_eps, log_i, proxies, entropies;
  std::vector<int> used;
  for (int j : j_list) {
    const RadialPotential member(noncompact_member(n, j).with_floor(wide.t_floor), n);
    const IntegralVerdict d = dp_proxy(member, zero, p, wide);
    const IntegralVerdict ent = entropy(member, wide);
    InequalityReport r = finiteness_report("noncompact_member", with(base, "j", double(j)), d);
    out.push_back(r);
    out.push_back(finiteness_report("noncompact_entropy_member",
                                    with(with(base, "j", double(j)), "entropy", ent.value), ent));
    if (d.finite() && d.value > 0.0) {
      log_eps.push_back(-j * std::log(2.0));
      log_i.push_back(std::log(d.value));
      proxies.push_back(d.value);
      entropies.push_back(ent.finite() ? ent.value : kInf);
      used.push_back(j);
    }
  }
  if (used.size() < 3) throw EstimationError("noncompact_scaling: fewer than 3 usable members");

  const double expected = n + p - n * p;
  const double slope = ols_slope(log_eps, log_i);
  out.push_back(make_report("noncompact_slope",
                            with(with(base, "slope", slope), "expected", expected),
                            std::abs(slope - expected), 0.1));
  if (n > 1 && std::abs(p - n / (n - 1.0)) < 1e-12) {
    const auto [mn, mx] = std::minmax_element(proxies.begin(), proxies.end());
    out.push_back(make_report("noncompact_band", base, *mx / *mn, 10.0));
  }
  const auto ref_it = std::find(used.begin(), used.end(), 4);
  const double ref = entropies[ref_it == used.end() ? 0 : ref_it - used.begin()];
  const double mx = *std::max_element(entropies.begin(), entropies.end());
  out.push_back(make_report("noncompact_entropy", with(base, "reference_j", double(ref_it == used.end() ? used[0] : 4)),
                            mx, 10.0 * ref));
  return out;
}

std::vector<InequalityReport> entropy_energy_pipeline(const std::vector<Weight>& weights, int n,
                                                 const QuadConfig& cfg) {
  std::vector<double> ps;
  if (n == 1) {
    ps = {1.0, 2.0, 4.0, 8.0};
  } else {
    for (double f : {0.25, 0.5, 0.75, 0.95}) ps.push_back(f * n / (n - 1.0));
  }
  std::vector<InequalityReport> out;
  for (const Weight& w : weights) {
    const RadialPotential rp(w, n);
    const IntegralVerdict ent = entropy(rp, cfg);
    for (double p : ps) {
      Params params = base_params(rp, p);
      if (!ent.finite()) {
        out.push_back(skipped_report("entropy_energy", std::move(params), "entropy not finite"));
        continue;
      }
      out.push_back(finiteness_report("entropy_energy", std::move(params), energy(rp, p, cfg)));
    }
  }
  return out;
}

}  // namespace pshlab
