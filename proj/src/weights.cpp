#include "pshlab/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pshlab/errors.hpp"

namespace pshlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double parse_number(const std::string& s, const std::string& spec) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw InputError("");
    return v;
  } catch (const std::exception&) {
    throw InputError("weight spec '" + spec + "': bad number '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

// Power-type families share the shape: closed form for t <= -1, quadratic
// continuation chi(-1) + chi'(-1)(t+1) + chi''(-1)(t+1)^2/2 beyond.
struct PowerPiece {
  double v, d1, d2;
};

PowerPiece power_alpha_piece(double a, double t) {
  if (t <= -1.0) {
    const double x = -t;
    return {-std::pow(x, a) / a, std::pow(x, a - 1.0), (1.0 - a) * std::pow(x, a - 2.0)};
  }
  const double u = t + 1.0;
  const double c = 1.0 - a;
  return {-1.0 / a + u + 0.5 * c * u * u, 1.0 + c * u, c};
}

PowerPiece divisor_power_piece(double r, double t) {
  if (t <= -1.0) {
    const double x = -t;
    return {-std::pow(x, r), r * std::pow(x, r - 1.0), r * (1.0 - r) * std::pow(x, r - 2.0)};
  }
  const double u = t + 1.0;
  const double c = r * (1.0 - r);
  return {-1.0 + r * u + 0.5 * c * u * u, r + c * u, c};
}

double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
double logistic(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}
double logistic_slope(double t) {
  const double e = std::exp(-std::abs(t));
  return e / ((1.0 + e) * (1.0 + e));
}

// Locates the cell of a table; returns -1 left of the table and ncell right of it.
long table_cell(const Tabulated& tab, double t) {
  const auto& ts = tab.grid.ts;
  if (t < ts.front()) return -1;
  if (t >= ts.back()) return static_cast<long>(ts.size()) - 1;
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  return static_cast<long>(it - ts.begin()) - 1;
}

PowerPiece table_piece(const Tabulated& tab, double t) {
  const auto& ts = tab.grid.ts;
  const auto& vs = tab.grid.vals;
  const auto& s = tab.node_slopes;
  const long ncell = static_cast<long>(ts.size()) - 1;
  const long i = table_cell(tab, t);
  if (i < 0) return {vs.front() + s.front() * (t - ts.front()), s.front(), 0.0};
  if (i >= ncell) return {vs.back() + s.back() * (t - ts.back()), s.back(), 0.0};
  const double h = ts[i + 1] - ts[i];
  const double delta = (vs[i + 1] - vs[i]) / h;
  const double knot = tab.knots[i];
  if (std::isnan(knot)) return {vs[i] + delta * (t - ts[i]), delta, 0.0};
  const double a = knot - ts[i];
  const double b = ts[i + 1] - knot;
  if (t <= knot) {
    const double x = t - ts[i];
    const double c = (delta - s[i]) / a;
    return {vs[i] + s[i] * x + 0.5 * c * x * x, s[i] + c * x, c};
  }
  const double x = t - knot;
  const double c = (s[i + 1] - delta) / b;
  const double vk = vs[i] + 0.5 * a * (s[i] + delta);
  return {vk + delta * x + 0.5 * c * x * x, delta + c * x, c};
}

PowerPiece evaluate(const Weight& w, double t);

PowerPiece evaluate(const Weight::Family& f, double t) {
  return std::visit(
      Overloaded{
          [t](const PowerAlpha& p) { return power_alpha_piece(p.alpha, t); },
          [t](const DivisorPower& p) { return divisor_power_piece(p.r, t); },
          [t](const Exp&) {
            const double e = std::exp(t);
            return PowerPiece{std::expm1(t), e, e};
          },
          [t](const SoftplusKink&) {
            return PowerPiece{softplus(t), logistic(t), logistic_slope(t)};
          },
          [t](const TranslatedScaled& ts) {
            const PowerPiece b = evaluate(*ts.base, t + ts.shift);
            return PowerPiece{ts.eps * b.v - ts.eps * ts.shift, ts.eps * b.d1, ts.eps * b.d2};
          },
          [t](const Tabulated& tab) { return table_piece(tab, t); },
      },
      f);
}

PowerPiece evaluate(const Weight& w, double t) { return evaluate(w.family(), t); }

void check_domain(double t) {
  if (!(t <= 0.0)) throw DomainError("weight evaluated at t=" + std::to_string(t) + " > 0");
}

}  // namespace

Weight Weight::power_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("power weight needs alpha in (0,1)");
  return Weight(PowerAlpha{alpha});
}

Weight Weight::divisor_power(double r) {
  if (!(r > 0.0 && r < 1.0)) throw InputError("divisor power weight needs r in (0,1)");
  return Weight(DivisorPower{r});
}

Weight Weight::exp() { return Weight(Exp{}); }

Weight Weight::softplus() { return Weight(SoftplusKink{}); }

Weight Weight::translated_scaled(const Weight& base, double eps, double shift) {
  if (!(eps > 0.0) || !(shift > 0.0) || !std::isfinite(eps) || !std::isfinite(shift))
    throw InputError("translated weight needs eps > 0 and C > 0");
  Weight w(TranslatedScaled{std::make_shared<const Weight>(base), eps, shift});
  w.t_floor_ = base.t_floor_;
  return w;
}

Weight Weight::tabulated(GridFunction grid) {
  grid.validate();
  const auto& ts = grid.ts;
  const auto& vs = grid.vals;
  const std::size_t ncell = ts.size() - 1;
  std::vector<double> delta(ncell);
  for (std::size_t i = 0; i < ncell; ++i) {
    delta[i] = (vs[i + 1] - vs[i]) / (ts[i + 1] - ts[i]);
    const double slack = 1e-12 * (1.0 + std::abs(delta[i]));
    if (delta[i] < -slack) throw InputError("tabulated weight must be nondecreasing");
    if (i > 0 && delta[i] < delta[i - 1] - slack)
      throw InputError("tabulated weight must be convex");
    delta[i] = std::max(delta[i], 0.0);
    if (i > 0) delta[i] = std::max(delta[i], delta[i - 1]);
  }

  std::vector<double> s(ts.size());
  if (ncell == 1) {
    s[0] = s[1] = delta[0];
  } else {
    for (std::size_t i = 1; i < ncell; ++i) s[i] = 0.5 * (delta[i - 1] + delta[i]);
    s[0] = std::max(0.0, 2.0 * delta[0] - s[1]);
    s[ncell] = 2.0 * delta[ncell - 1] - s[ncell - 1];
  }

  std::vector<double> knots(ncell, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < ncell; ++i) {
    const double lo = delta[i] - s[i];
    const double hi = s[i + 1] - delta[i];
    const double tol = 1e-14 * (1.0 + std::abs(delta[i]));
    if (lo <= tol || hi <= tol) continue;
    const double h = ts[i + 1] - ts[i];
    knots[i] = ts[i] + h * hi / (lo + hi);
  }

  Weight w(Tabulated{std::move(grid), std::move(s), std::move(knots), "tab"});
  return w;
}

Weight Weight::identity() {
  Weight w = tabulated(GridFunction{{-10.0, -1.0}, {-10.0, -1.0}});
  std::get<Tabulated>(w.family_).label = "identity";
  return w;
}

Weight Weight::zero() {
  Weight w = tabulated(GridFunction{{-10.0, -1.0}, {0.0, 0.0}});
  std::get<Tabulated>(w.family_).label = "zero";
  return w;
}

Weight Weight::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.empty()) throw InputError("empty weight spec");
  const std::string& head = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw InputError("weight spec '" + spec + "': wrong number of fields");
  };
  if (head == "power") {
    need(2);
    return power_alpha(parse_number(parts[1], spec));
  }
  if (head == "divpower") {
    need(2);
    return divisor_power(parse_number(parts[1], spec));
  }
  if (head == "exp") {
    need(1);
    return exp();
  }
  if (head == "softplus") {
    need(1);
    return softplus();
  }
  if (head == "identity") {
    need(1);
    return identity();
  }
  if (head == "zero") {
    need(1);
    return zero();
  }
  if (head == "ts") {
    if (parts.size() < 4) throw InputError("weight spec '" + spec + "': ts needs base:eps:C");
    std::string base;
    for (std::size_t i = 1; i + 2 < parts.size(); ++i) base += (i > 1 ? ":" : "") + parts[i];
    return translated_scaled(parse(base), parse_number(parts[parts.size() - 2], spec),
                             parse_number(parts.back(), spec));
  }
  if (head == "tab") {
    if (parts.size() < 2) throw InputError("weight spec '" + spec + "': tab needs a path");
    const std::string path = spec.substr(4);
    std::ifstream in(path);
    if (!in) throw InputError("cannot open table '" + path + "'");
    GridFunction g;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream row(line);
      double t = 0.0, v = 0.0;
      if (!(row >> t >> v)) continue;  // header
      g.ts.push_back(t);
      g.vals.push_back(v);
    }
    Weight w = tabulated(std::move(g));
    std::get<Tabulated>(w.family_).label = "tab:" + path;
    return w;
  }
  throw InputError("unknown weight family '" + head + "'");
}

Weight Weight::with_floor(double t_floor) const {
  if (!(t_floor < 0.0)) throw InputError("t_floor must be negative");
  Weight w = *this;
  w.t_floor_ = t_floor;
  return w;
}

double Weight::value(double t) const { return evaluate(*this, t).v; }
double Weight::d1(double t) const { return evaluate(*this, t).d1; }
double Weight::d2(double t) const { return evaluate(*this, t).d2; }

std::vector<double> Weight::breakpoints() const {
  return std::visit(Overloaded{
                        [](const PowerAlpha&) { return std::vector<double>{-1.0}; },
                        [](const DivisorPower&) { return std::vector<double>{-1.0}; },
                        [](const Exp&) { return std::vector<double>{}; },
                        [](const SoftplusKink&) { return std::vector<double>{0.0}; },
                        [](const TranslatedScaled& ts) {
                          auto bps = ts.base->breakpoints();
                          for (double& b : bps) b -= ts.shift;
                          return bps;
                        },
                        [](const Tabulated& tab) {
                          if (tab.grid.size() > 256) return std::vector<double>{};
                          std::vector<double> bps = tab.grid.ts;
                          for (double k : tab.knots)
                            if (!std::isnan(k)) bps.push_back(k);
                          std::sort(bps.begin(), bps.end());
                          return bps;
                        },
                    },
                    family_);
}

std::string Weight::describe() const {
  auto num = [](double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  return std::visit(Overloaded{
                        [&](const PowerAlpha& p) { return "power:" + num(p.alpha); },
                        [&](const DivisorPower& p) { return "divpower:" + num(p.r); },
                        [](const Exp&) { return std::string("exp"); },
                        [](const SoftplusKink&) { return std::string("softplus"); },
                        [&](const TranslatedScaled& ts) {
                          return "ts:" + ts.base->describe() + ":" + num(ts.eps) + ":" +
                                 num(ts.shift);
                        },
                        [](const Tabulated& tab) { return tab.label; },
                    },
                    family_);
}

double eval(const Weight& w, double t) {
  check_domain(t);
  return w.value(t);
}

double deriv(const Weight& w, double t, int order) {
  check_domain(t);
  if (order == 1) return w.d1(t);
  if (order == 2) return w.d2(t);
  throw InputError("unsupported derivative order " + std::to_string(order));
}

GridFunction compose_power(const Weight& w, double q, const std::vector<double>& ts) {
  if (!(q > 1.0)) throw InputError("compose_power needs q > 1");
  GridFunction out;
  out.ts = ts;
  out.vals.reserve(ts.size());
  for (double t : ts) {
    const double chi = eval(w, t);
    if (chi > 0.0)
      throw PoleError("-(-chi)^q undefined: chi(" + std::to_string(t) + ") > 0");
    out.vals.push_back(-std::pow(-chi, q));
  }
  out.validate();
  return out;
}

}  // namespace pshlab
