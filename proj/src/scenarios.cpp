#include "pshlab/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "pshlab/divisorial.hpp"
#include "pshlab/envelopes.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/radial.hpp"

namespace pshlab {

namespace {

using Reports = std::vector<InequalityReport>;
using Task = std::function<Reports()>;

const std::vector<double> kEntropyAlphas{0.30, 0.40, 0.49, 0.55, 0.60, 0.70};

Params wp(const Weight& w, int n) { return {{"weight", w.describe()}, {"n", double(n)}}; }

Params with(Params base, std::string key, ParamValue value) {
  base.emplace_back(std::move(key), std::move(value));
  return base;
}

InequalityReport bool_report(std::string name, Params params, bool ok, std::string why = "") {
  InequalityReport r = make_report(std::move(name), std::move(params), ok ? 0.0 : 1.0, 0.0);
  if (!ok) r.reason = std::move(why);
  return r;
}

std::vector<int> dims(const ScenarioOptions& o, std::vector<int> fallback) {
  if (o.n) return {*o.n};
  return fallback;
}

Weight weight_or(const ScenarioOptions& o, const std::string& fallback) {
  return Weight::parse(o.weight.value_or(fallback));
}

// {first, first + 1, ..., first + count - 1} / denom, exact decimals for denom = 10, 20.
std::vector<double> range_list(int first, int count, double denom) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back((first + i) / denom);
  return v;
}

// ---- scenarios ------------------------------------------------------------

std::vector<Task> entropy_threshold(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  for (int n : dims(o, {2, 3}))
    for (double alpha : kEntropyAlphas)
      tasks.push_back([n, alpha, cfg = o.quad] {
        const Weight w = Weight::power_alpha(alpha);
        const Params base = with(wp(w, n), "alpha", alpha);
        const bool expect = alpha < (n - 1.0) / n;
        Reports out;
        EntropyVerdicts ev;
        try {
          ev = entropy_verdicts(RadialPotential(w, n), cfg);
        } catch (const ConsistencyError& e) {
          out.push_back(bool_report("entropy_consistency", base, false, e.what()));
          return out;
        }
        out.push_back(expectation_report("entropy", base, ev.exact, expect));
        out.push_back(expectation_report("entropy_criterion", base, ev.criterion, expect));
        const double symbolic = n * (alpha - 1.0);
        out.push_back(make_report("criterion_exponent", with(base, "symbolic", symbolic),
                                  std::abs(ev.criterion.tail_exponent - symbolic), 0.05));
        return out;
      });
  return tasks;
}

std::vector<Task> energy_threshold(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  const int n = o.n.value_or(2);
  for (double alpha : {0.30, 0.45, 0.60})
    tasks.push_back([n, alpha, cfg = o.quad] {
      const Weight w = Weight::power_alpha(alpha);
      const RadialPotential rp(w, n);
      const double expected = n * (1.0 - alpha) / alpha;
      const Params base = with(wp(w, n), "alpha", alpha);
      Reports out;
      const double pc = critical_p(rp, cfg);
      out.push_back(make_report("critical_p", with(with(base, "critical_p", pc), "expected", expected),
                                std::abs(pc - expected), 0.1));
      for (double f : {0.5, 0.9, 1.1, 1.5}) {
        const double p = f * expected;
        out.push_back(expectation_report("energy", with(base, "p", p), energy(rp, p, cfg), f < 1.0));
      }
      return out;
    });
  return tasks;
}

std::vector<Task> sharp_exponent(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  const double eps = 0.2;
  for (int n : dims(o, {2, 3})) {
    const double alpha = (n - 1.0) / (n + eps);
    const double p_in = n / (n - 1.0);
    const double p_out = p_in * (1.0 + eps) * 1.05;
    for (auto [p, expect] : {std::pair{p_in, true}, std::pair{p_out, false}})
      tasks.push_back([n, alpha, eps, p, expect, cfg = o.quad] {
        const Weight w = Weight::power_alpha(alpha);
        const Params params = with(with(with(wp(w, n), "alpha", alpha), "eps", eps), "p", p);
        return Reports{expectation_report("sharp_energy", params,
                                          energy(RadialPotential(w, n), p, cfg), expect)};
      });
  }
  return tasks;
}

std::vector<Task> mt_sweep(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  for (int n : dims(o, {2, 3})) {
    std::vector<Weight> weights;
    for (double alpha : kEntropyAlphas) weights.push_back(Weight::power_alpha(alpha));
    weights.push_back(Weight::exp());
    const std::vector<double> ps = o.p ? std::vector<double>{*o.p}
                                       : std::vector<double>{1.0, n / (n - 1.0)};
    for (const Weight& w : weights)
      for (double p : ps)
        tasks.push_back([w, n, p, cfg = o.quad] {
          const RadialPotential rp(w, n);
          const IntegralVerdict ent = entropy(rp, cfg);
          if (!ent.finite())
            return Reports{skipped_report("mt", with(wp(w, n), "p", p), "entropy not finite")};
          return check_mt(rp, p, default_mt_grid(n, p), cfg);
        });
  }
  return tasks;
}

std::vector<Task> aubin(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  const int n = o.n.value_or(2);
  const double p = o.p.value_or(1.0);
  std::vector<std::string> specs{"power:0.45", "exp"};
  if (o.weight) specs = {*o.weight};
  for (const auto& spec : specs)
    tasks.push_back([spec, n, p, cfg = o.quad] {
      return check_aubin(RadialPotential(Weight::parse(spec), n), p, {1, 2, 4, 8, 16}, cfg);
    });
  return tasks;
}

std::vector<Task> capacity_energy(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  const std::vector<double> levels = range_list(1, 9, 10.0);
  tasks.push_back([cfg = o.quad] {
    const RadialPotential rp(Weight::exp(), 2);
    Reports out;
    const IntegralVerdict e1 = energy(rp, 1.0, cfg);
    InequalityReport closed = make_report("energy_closed_form", with(wp(rp.weight(), 2), "p", 1.0),
                                          std::abs(e1.value - 1.0 / 3.0), 1e-6);
    closed.quad = e1;
    out.push_back(closed);
    const double spot = 0.125 * capacity_sublevel(rp, 0.5);
    out.push_back(make_report("capacity_spot", {{"s", 0.5}, {"lhs", spot}, {"expected", 0.2602}},
                              std::abs(spot - 0.2602), 1e-4));
    return out;
  });
  std::vector<std::string> specs{"exp", "softplus", "ts:softplus:0.5:4"};
  if (o.weight) specs = {*o.weight};
  for (int n : dims(o, {2, 3}))
    for (double p : o.p ? std::vector<double>{*o.p} : std::vector<double>{0.5, 1.0, 2.0})
      for (const auto& spec : specs)
        tasks.push_back([spec, n, p, levels, cfg = o.quad] {
          return check_capacity_energy(RadialPotential(Weight::parse(spec), n), p, levels, cfg);
        });
  if (!o.weight)
    tasks.push_back([levels, cfg = o.quad] {
      return check_capacity_energy(RadialPotential(Weight::power_alpha(0.45), 2), 1.0, levels, cfg);
    });
  return tasks;
}

std::vector<Task> volume_capacity(const ScenarioOptions& o) {
  const int n = o.n.value_or(2);
  const std::vector<double> pole_levels = range_list(1, 20, 1.0);
  const std::vector<double> exp_levels = range_list(1, 19, 20.0);
  std::vector<Task> tasks;
  for (double beta : {3.9, 4.0})
    tasks.push_back([n, beta, pole_levels] {
      return Reports{check_volume_capacity(RadialPotential(Weight::identity(), n),
                                           beta * n / 2.0, pole_levels)};
    });
  tasks.push_back([n, exp_levels] {
    return Reports{check_volume_capacity(RadialPotential(Weight::exp(), n), 3.5 * n / 2.0,
                                         exp_levels)};
  });
  return tasks;
}

std::vector<Task> divisorial(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  tasks.push_back([cfg = o.quad] {
    Reports out;
    for (double r : {0.3, 0.5, 0.7}) {
      const Weight w = Weight::divisor_power(r);
      out.push_back(expectation_report("div_entropy", {{"weight", w.describe()}}, div_entropy(w, cfg), false));
    }
    for (const Weight& w : {Weight::exp(), Weight::identity()})
      out.push_back(expectation_report("div_entropy", {{"weight", w.describe()}}, div_entropy(w, cfg), true));
    // Finite slice entropy exactly for bounded weights, among weights whose slope vanishes at -inf.
    for (const char* spec : {"exp", "softplus", "ts:softplus:0.25:16", "power:0.45", "divpower:0.2"}) {
      const Weight w = Weight::parse(spec);
      out.push_back(expectation_report("div_nogo", {{"weight", w.describe()}}, div_entropy(w, cfg),
                                       floor_bounded(w)));
    }
    return out;
  });
  for (double p : {0.5, 1.0, 2.0, 3.0})
    tasks.push_back([p, cfg = o.quad] {
      Reports out;
      for (int i = 1; i <= 9; ++i) {
        const double r = i / 10.0;
        const Weight w = Weight::divisor_power(r);
        const double exponent = p * r + r - 2.0;
        Params params{{"weight", w.describe()}, {"p", p}, {"r", r}, {"exponent", exponent}};
        if (std::abs(exponent + 1.0) <= cfg.delta_margin + 1e-12) {
          out.push_back(skipped_report("div_energy", std::move(params), "exponent inside the critical band"));
          continue;
        }
        out.push_back(expectation_report("div_energy", std::move(params), div_energy(w, p, cfg),
                                         r < 1.0 / (1.0 + p)));
      }
      return out;
    });
  tasks.push_back([n = o.n.value_or(2), cfg = o.quad] {
    Reports out;
    for (double r : {0.3, 0.5, 0.7}) {
      const Weight w = Weight::divisor_power(r);
      const double radial = critical_p(RadialPotential(w, n), cfg);
      const double slice = div_critical_p(w, cfg);
      InequalityReport rep = make_report(
          "critical_contrast",
          {{"weight", w.describe()}, {"n", double(n)}, {"radial", radial}, {"divisorial", slice}},
          slice, radial);
      if (!(radial > slice)) {
        rep.verdict = ReportVerdict::Violated;
        rep.reason = "radial critical exponent not above the divisorial one";
      }
      out.push_back(rep);
    }
    return out;
  });
  return tasks;
}

GridFunction perturbed_convex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = 0.5 + 1.5 * u(rng), b = 0.5 + 1.5 * u(rng), amp = 0.01 + 0.3 * u(rng);
  GridFunction g;
  g.ts = linspace(-8.0, 0.0, 300);
  for (double t : g.ts) g.vals.push_back(a * std::expm1(b * t) + amp * (2.0 * u(rng) - 1.0));
  return g;
}

std::vector<Task> envelope_contact(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  const std::uint64_t seed = o.seed;
  tasks.push_back([seed] {
    Reports out;
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::string, GridFunction>> inputs;
    GridFunction dip;
    dip.ts = linspace(-6.0, 0.0, 600);
    for (double t : dip.ts) dip.vals.push_back(std::min(std::expm1(t), std::exp(t + 2.0) - 1.5));
    inputs.emplace_back("dip", dip);
    for (int i = 0; i < 50; ++i) inputs.emplace_back("random" + std::to_string(i), perturbed_convex(rng));

    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& [label, g] : inputs) {
      const Params params{{"input", label}, {"n", 2.0}, {"seed", double(seed)}};
      const EnvelopeResult r = convex_increasing_minorant(g, 2);
      out.push_back(make_report("envelope_contact", params, r.off_contact_ma(), 1e-8 * r.total_ma()));

      const EnvelopeResult again = convex_increasing_minorant(r.env, 2);
      out.push_back(bool_report("envelope_idempotent", params, again.env.vals == r.env.vals,
                                "second pass changed the envelope"));

      // Convex nondecreasing candidates below g: max of random nonnegative-slope lines, lowered.
      double worst = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < 100; ++c) {
        std::vector<std::pair<double, double>> lines;
        for (int k = 0; k < 4; ++k) lines.emplace_back(3.0 * u(rng), -8.0 + 8.0 * u(rng));
        std::vector<double> cand;
        double lift = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i) {
          double v = 0.0;
          for (auto [m, tau] : lines) v = std::max(v, m * (g.ts[i] - tau));
          cand.push_back(v);
          lift = std::max(lift, v - g.vals[i]);
        }
        for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, cand[i] - lift - r.env.vals[i]);
      }
      out.push_back(make_report("envelope_maximal", params, worst, 0.0));

      GridFunction upper = g;
      for (double& v : upper.vals) v += 0.2 * u(rng);
      const EnvelopeResult ru = convex_increasing_minorant(upper, 2);
      double gap = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < g.size(); ++i) gap = std::max(gap, r.env.vals[i] - ru.env.vals[i]);
      out.push_back(make_report("envelope_monotone", params, gap, 0.0));
    }
    return out;
  });
  struct Case {
    const char* spec;
    double q;
    bool expect;
  };
  for (const Case c : {Case{"power:0.45", 1.5, true}, Case{"identity", 2.0, false}, Case{"exp", 1.5, true}})
    tasks.push_back([c, n = o.n.value_or(2)] {
      const EnvelopePowerResult r = envelope_power(RadialPotential(Weight::parse(c.spec), n), c.q);
      const Params params{{"weight", c.spec}, {"n", double(n)}, {"q", c.q},
                          {"left_slope", r.left_slopes[0]}, {"slope_decay", r.slope_decay},
                          {"full_mass", r.full_mass ? "true" : "false"},
                          {"expected", c.expect ? "true" : "false"}};
      return Reports{bool_report("envelope_full_mass", params, r.full_mass == c.expect,
                                 "full-mass test disagrees")};
    });
  return tasks;
}

std::vector<Task> noncompact(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  const int n = o.n.value_or(2);
  std::vector<double> ps{1.0, 1.5, 2.0};
  if (o.p) ps = {*o.p};
  for (double p : ps)
    tasks.push_back([n, p, cfg = o.quad] { return noncompact_scaling(n, p, {4, 5, 6, 7, 8, 9}, cfg); });
  return tasks;
}

std::vector<Task> dim1_bounded(const ScenarioOptions& o) {
  std::vector<Task> tasks;
  for (const char* spec : {"power:0.3", "power:0.5", "power:0.7", "divpower:0.5", "exp", "softplus",
                           "ts:softplus:0.25:16", "identity"})
    tasks.push_back([spec = std::string(spec), cfg = o.quad] {
      const Weight w = Weight::parse(spec);
      const RadialPotential rp(w, 1);
      const IntegralVerdict ent = entropy(rp, cfg);
      Reports out;
      const Params params = wp(w, 1);
      if (std::holds_alternative<PowerAlpha>(w.family())) {
        out.push_back(expectation_report("dim1_entropy", params, ent, false));
      } else if (ent.finite()) {
        out.push_back(finiteness_report("dim1_entropy", params, ent));
      } else {
        InequalityReport r = skipped_report("dim1_entropy", params, "entropy not finite");
        r.quad = ent;
        out.push_back(r);
      }
      if (ent.finite()) {
        const double far = w.value(w.t_floor());
        const double change = std::abs(far - w.value(0.5 * w.t_floor())) / std::max(1.0, std::abs(far));
        out.push_back(make_report("dim1_bounded", with(params, "chi_floor", far), change, 1e-3));
      }
      return out;
    });
  return tasks;
}

using Builder = std::vector<Task> (*)(const ScenarioOptions&);

const std::vector<std::pair<std::string, Builder>>& scenario_table() {
  static const std::vector<std::pair<std::string, Builder>> table{
      {"entropy-threshold", entropy_threshold},
      {"energy-threshold", energy_threshold},
      {"sharp-exponent", sharp_exponent},
      {"mt-sweep", mt_sweep},
      {"aubin", aubin},
      {"capacity-energy", capacity_energy},
      {"volume-capacity", volume_capacity},
      {"divisorial", divisorial},
      {"envelope-contact", envelope_contact},
      {"noncompact", noncompact},
      {"dim1-bounded", dim1_bounded},
  };
  return table;
}

// ---- check suites -----------------------------------------------------------

std::vector<Task> suite_tasks(const std::string& suite, const ScenarioOptions& o) {
  const int n = o.n.value_or(2);
  const double p = o.p.value_or(1.0);
  const QuadConfig cfg = o.quad;
  if (suite == "young")
    return {[seed = o.seed] { return young_suite(100, 20, seed); }};
  if (suite == "mt")
    return {[=] {
      const RadialPotential rp(weight_or(o, "power:0.45"), n);
      return check_mt(rp, p, default_mt_grid(n, p), cfg);
    }};
  if (suite == "aubin")
    return {[=] {
      return check_aubin(RadialPotential(weight_or(o, "power:0.45"), n), p, {1, 2, 4, 8, 16}, cfg);
    }};
  if (suite == "capacity")
    return {[=] {
      return check_capacity_energy(RadialPotential(weight_or(o, "exp"), n), p,
                                   range_list(1, 9, 10.0), cfg);
    }};
  if (suite == "volume")
    return {[=] {
      const RadialPotential rp(weight_or(o, "identity"), n);
      const bool pole = !floor_bounded(rp.weight());
      const auto levels = pole ? range_list(1, 20, 1.0) : range_list(1, 19, 20.0);
      Reports out;
      for (double f : {0.875, 0.975, 1.0}) out.push_back(check_volume_capacity(rp, f * 2.0 * n, levels));
      return out;
    }};
  if (suite == "noncompact")
    return {[=] { return noncompact_scaling(n, p, {4, 5, 6, 7, 8, 9}, cfg); }};
  if (suite == "thmA")
    return {[=] {
      std::vector<Weight> ws;
      if (o.weight) {
        ws.push_back(Weight::parse(*o.weight));
      } else {
        for (const char* s : {"power:0.3", "power:0.45", "power:0.7", "divpower:0.3", "exp", "softplus",
                              "ts:softplus:0.25:16", "identity"})
          ws.push_back(Weight::parse(s));
      }
      return entropy_energy_pipeline(ws, n, cfg);
    }};
  throw InputError("unknown suite '" + suite + "'");
}

ScenarioResult finish(std::vector<ReportRow> rows) {
  ScenarioResult res;
  res.rows = std::move(rows);
  res.ok = std::none_of(res.rows.begin(), res.rows.end(),
                        [](const ReportRow& r) { return r.verdict == "Violated"; });
  return res;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, builder] : scenario_table()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return names;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"young", "mt", "aubin", "capacity", "volume",
                                              "noncompact", "thmA", "all"};
  return names;
}

std::vector<ReportRow> run_tasks(const std::string& scenario, const std::vector<Task>& tasks,
                                 unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::vector<ReportRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        for (const auto& r : tasks[i]()) results[i].push_back(to_row(scenario, r));
      } catch (const std::exception& e) {
        InequalityReport err;
        err.name = "error";
        err.verdict = ReportVerdict::Violated;
        err.reason = e.what();
        results[i] = {to_row(scenario, err)};
      }
    }
  };
  const unsigned count = std::min<std::size_t>(threads, tasks.size());
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < count; ++k) pool.emplace_back(worker);
  }
  std::vector<ReportRow> rows;
  for (auto& part : results)
    for (auto& r : part) rows.push_back(std::move(r));
  return rows;
}

ScenarioResult run_scenario(const std::string& name, const ScenarioOptions& opts) {
  opts.quad.validate();
  std::vector<ReportRow> rows;
  bool found = false;
  for (const auto& [scenario, builder] : scenario_table()) {
    if (name != "all" && name != scenario) continue;
    found = true;
    auto part = run_tasks(scenario, builder(opts), opts.threads);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  if (!found) throw InputError("unknown scenario '" + name + "'");
  return finish(std::move(rows));
}

ScenarioResult run_suite(const std::string& suite, const ScenarioOptions& opts) {
  opts.quad.validate();
  std::vector<ReportRow> rows;
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw InputError("unknown suite '" + suite + "'");
  for (const auto& s : names) {
    if (s == "all" || (suite != "all" && suite != s)) continue;
    auto part = run_tasks("check:" + s, suite_tasks(s, opts), opts.threads);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return finish(std::move(rows));
}

}  // namespace pshlab
