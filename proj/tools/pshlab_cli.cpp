#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pshlab/divisorial.hpp"
#include "pshlab/envelopes.hpp"
#include "pshlab/errors.hpp"
#include "pshlab/radial.hpp"
#include "pshlab/report.hpp"
#include "pshlab/scenarios.hpp"

using namespace pshlab;

namespace {

struct Options {
  std::vector<int> n{2};
  std::vector<double> p{1.0};
  std::vector<double> alpha;
  std::vector<std::string> weight;
  std::string weight2 = "zero";
  std::vector<double> c{1.0};
  std::vector<double> k{1.0};
  std::vector<double> s{0.5};
  std::vector<double> q{1.5};
  std::string model = "ball";
  QuadConfig quad;
  std::vector<double> tail_window{-1.0e5, -1.0e2};
  double grid_lo = -1.0e3, grid_hi = -1.0e-3;
  std::size_t grid_nodes = 4096;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 20240611;
  std::string suite = "all";
  std::string scenario;
  unsigned threads = 0;
};

std::vector<Weight> weights(const Options& o) {
  std::vector<Weight> ws;
  for (double a : o.alpha) ws.push_back(Weight::power_alpha(a));
  for (const auto& spec : o.weight) ws.push_back(Weight::parse(spec));
  if (ws.empty()) throw InputError("give at least one --weight or --alpha");
  for (auto& w : ws) w = w.with_floor(o.quad.t_floor);
  return ws;
}

Model model(const Options& o) {
  if (o.model == "ball") return Model::Ball;
  if (o.model == "projective") return Model::Projective;
  throw InputError("unknown model '" + o.model + "' (ball or projective)");
}

Params base(const Weight& w, int n, const Options& o) {
  return {{"weight", w.describe()}, {"n", double(n)}, {"model", o.model}};
}

Params with(Params p, std::string key, double v) {
  p.emplace_back(std::move(key), v);
  return p;
}

ReportRow estimate_row(const std::string& cmd, const Params& params, double value) {
  ReportRow row;
  row.scenario = cmd;
  row.name = cmd;
  row.param_json = params_json(params);
  row.verdict = std::isfinite(value) ? "Estimated" : "Unbounded";
  row.value = value;
  return row;
}

std::vector<ReportRow> functional_rows(const std::string& cmd, const Options& o) {
  std::vector<ReportRow> rows;
  const QuadConfig& cfg = o.quad;
  const auto ws = weights(o);
  auto radial = [&](auto&& body) {
    for (const Weight& w : ws)
      for (int n : o.n) body(w, n, RadialPotential(w, n, model(o)));
  };
  if (cmd == "entropy") {
    radial([&](const Weight& w, int n, const RadialPotential& rp) {
      const EntropyVerdicts ev = entropy_verdicts(rp, cfg);
      rows.push_back(to_row(cmd, "entropy", base(w, n, o), ev.exact));
      rows.push_back(to_row(cmd, "entropy_criterion", base(w, n, o), ev.criterion));
    });
  } else if (cmd == "energy") {
    radial([&](const Weight& w, int n, const RadialPotential& rp) {
      for (double p : o.p) rows.push_back(to_row(cmd, cmd, with(base(w, n, o), "p", p), energy(rp, p, cfg)));
    });
  } else if (cmd == "critical-p") {
    radial([&](const Weight& w, int n, const RadialPotential& rp) {
      rows.push_back(estimate_row(cmd, base(w, n, o), critical_p(rp, cfg)));
    });
  } else if (cmd == "mt") {
    radial([&](const Weight& w, int n, const RadialPotential& rp) {
      for (double p : o.p)
        for (double c : o.c)
          rows.push_back(to_row(cmd, cmd, with(with(base(w, n, o), "p", p), "c", c),
                                mt_integral(rp, p, c, cfg)));
    });
  } else if (cmd == "exp-moment") {
    radial([&](const Weight& w, int n, const RadialPotential& rp) {
      for (double k : o.k)
        rows.push_back(to_row(cmd, cmd, with(base(w, n, o), "k", k), exp_moment(rp, k, cfg)));
    });
  } else if (cmd == "capacity") {
    radial([&](const Weight& w, int n, const RadialPotential& rp) {
      for (double s : o.s) {
        Params params = with(base(w, n, o), "s", s);
        params.emplace_back("volume", volume_sublevel(rp, s));
        rows.push_back(estimate_row(cmd, params, capacity_sublevel(rp, s)));
      }
    });
  } else if (cmd == "dp-proxy") {
    const Weight other = Weight::parse(o.weight2).with_floor(cfg.t_floor);
    radial([&](const Weight& w, int n, const RadialPotential& rp) {
      const RadialPotential rp2(other, n, model(o));
      for (double p : o.p) {
        Params params = with(base(w, n, o), "p", p);
        params.emplace_back("weight2", other.describe());
        rows.push_back(to_row(cmd, cmd, params, dp_proxy(rp, rp2, p, cfg)));
      }
    });
  } else if (cmd == "div-entropy") {
    for (const Weight& w : ws) rows.push_back(to_row(cmd, cmd, {{"weight", w.describe()}}, div_entropy(w, cfg)));
  } else if (cmd == "div-energy") {
    for (const Weight& w : ws)
      for (double p : o.p)
        rows.push_back(to_row(cmd, cmd, {{"weight", w.describe()}, {"p", p}}, div_energy(w, p, cfg)));
  }
  return rows;
}

void write_envelope(std::ostream& os, const Options& o) {
  const bool json = parse_format(o.format) == OutputFormat::Json;
  const EnvelopeGrid grid{o.grid_lo, o.grid_hi, o.grid_nodes};
  if (json)
    os << "[";
  else
    os << "weight,n,q,t,g,env,contact,discrete_ma,full_mass\n";
  bool first = true;
  for (const Weight& w : weights(o))
    for (int n : o.n)
      for (double q : o.q) {
        const RadialPotential rp(w, n, model(o));
        const EnvelopePowerResult r = envelope_power(rp, q, grid);
        const GridFunction g = compose_power(rp, q, r.envelope.env.ts);
        const std::string fm = r.full_mass ? "true" : "false";
        for (std::size_t i = 0; i < g.size(); ++i) {
          const auto& e = r.envelope;
          const std::string contact = e.contact[i] ? "true" : "false";
          if (json) {
            os << (first ? "\n " : ",\n ") << "{\"weight\":\"" << w.describe() << "\",\"n\":" << n
               << ",\"q\":" << format_number(q) << ",\"t\":" << format_number(g.ts[i])
               << ",\"g\":" << format_number(g.vals[i]) << ",\"env\":" << format_number(e.env.vals[i])
               << ",\"contact\":" << contact << ",\"discrete_ma\":" << format_number(e.discrete_ma[i])
               << ",\"full_mass\":" << fm << "}";
          } else {
            os << w.describe() << ',' << n << ',' << format_number(q) << ',' << format_number(g.ts[i])
               << ',' << format_number(g.vals[i]) << ',' << format_number(e.env.vals[i]) << ','
               << contact << ',' << format_number(e.discrete_ma[i]) << ',' << fm << '\n';
          }
          first = false;
        }
      }
  if (json) os << (first ? "]\n" : "\n]\n");
}

ScenarioOptions scenario_options(const Options& o, const CLI::App& app) {
  ScenarioOptions so;
  so.quad = o.quad;
  so.seed = o.seed;
  so.threads = o.threads;
  if (app.count("--n")) so.n = o.n.front();
  if (app.count("--p")) so.p = o.p.front();
  if (app.count("--weight")) so.weight = o.weight.front();
  if (app.count("--alpha")) so.weight = Weight::power_alpha(o.alpha.front()).describe();
  return so;
}

template <class F>
int emit(const Options& o, F&& body) {
  if (o.out.empty()) return body(std::cout);
  std::ofstream file(o.out);
  if (!file) throw InputError("cannot open output file " + o.out);
  return body(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial pluripotential experiments: entropy, energy, Moser-Trudinger and envelope checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.set_config("--config", "", "TOML/INI file with option defaults")->envname("PSHLAB_CONFIG");
  app.allow_config_extras(false);

  app.add_option("--n", o.n, "Complex dimension(s)")->capture_default_str();
  app.add_option("--p", o.p, "Energy exponent(s)")->capture_default_str();
  app.add_option("--alpha", o.alpha, "Shortcut for --weight power:<alpha>");
  app.add_option("--weight", o.weight,
                 "Weight spec(s): power:a, divpower:r, exp, softplus, identity, zero, ts:<base>:eps:C, tab:<csv>");
  app.add_option("--weight2", o.weight2, "Second weight for dp-proxy")->capture_default_str();
  app.add_option("--c", o.c, "Moser-Trudinger constant(s)")->capture_default_str();
  app.add_option("--k", o.k, "Exponential moment parameter(s)")->capture_default_str();
  app.add_option("--s", o.s, "Sublevel(s) for capacity")->capture_default_str();
  app.add_option("--q", o.q, "Envelope power(s) q > 1")->capture_default_str();
  app.add_option("--model", o.model, "ball or projective")->capture_default_str();
  app.add_option("--t-floor", o.quad.t_floor, "Quadrature stand-in for -infinity")->capture_default_str();
  app.add_option("--rel-tol", o.quad.rel_tol, "Relative tolerance of the adaptive quadrature")
      ->capture_default_str();
  app.add_option("--tail-window", o.tail_window, "Tail-fit window lo hi")->expected(2)->capture_default_str();
  app.add_option("--delta-margin", o.quad.delta_margin, "Half-width of the inconclusive exponent band")
      ->capture_default_str();
  app.add_option("--max-subdivisions", o.quad.max_subdivisions, "Adaptive panel budget")->capture_default_str();
  app.add_option("--grid-lo", o.grid_lo, "Envelope grid left end")->capture_default_str();
  app.add_option("--grid-hi", o.grid_hi, "Envelope grid right end")->capture_default_str();
  app.add_option("--grid-nodes", o.grid_nodes, "Envelope grid size")->capture_default_str();
  app.add_option("--format", o.format, "csv or json")->capture_default_str();
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_option("--seed", o.seed, "Seed for randomized sweeps")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads (0 = hardware)")->capture_default_str();

  const std::vector<std::pair<std::string, std::string>> functionals{
      {"entropy", "Entropy verdicts (exact and criterion)"},
      {"energy", "Energy E_p"},
      {"critical-p", "Supremum of p with finite energy"},
      {"mt", "Moser-Trudinger integral"},
      {"exp-moment", "Exponential moment of -v"},
      {"capacity", "Capacity and volume of sublevel sets"},
      {"dp-proxy", "Energy distance proxy between --weight and --weight2"},
      {"div-entropy", "Divisorial slice entropy"},
      {"div-energy", "Divisorial slice energy"},
  };
  for (const auto& [name, help] : functionals) app.add_subcommand(name, help);
  app.add_subcommand("envelope", "Envelope of -(-v)^q on a log grid (samples and contact mask)");
  auto* check = app.add_subcommand("check", "Inequality checkers");
  check->add_option("--suite", o.suite, "young, mt, aubin, capacity, volume, noncompact, thmA or all")
      ->capture_default_str();
  auto* run = app.add_subcommand("run", "Run an acceptance scenario");
  run->add_option("scenario", o.scenario, "Scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    o.quad.tail_window = {o.tail_window.at(0), o.tail_window.at(1)};
    o.quad.validate();
    const OutputFormat fmt = parse_format(o.format);
    const std::string cmd = app.get_subcommands().front()->get_name();

    if (cmd == "envelope")
      return emit(o, [&](std::ostream& os) {
        write_envelope(os, o);
        return 0;
      });
    if (cmd == "check" || cmd == "run") {
      const ScenarioOptions so = scenario_options(o, app);
      const ScenarioResult res = cmd == "check" ? run_suite(o.suite, so) : run_scenario(o.scenario, so);
      return emit(o, [&](std::ostream& os) {
        write_rows(os, res.rows, fmt);
        return res.ok ? 0 : 1;
      });
    }
    const auto rows = functional_rows(cmd, o);
    return emit(o, [&](std::ostream& os) {
      write_rows(os, rows, fmt);
      return 0;
    });
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
