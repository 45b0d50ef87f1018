#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "pshlab/errors.hpp"
#include "pshlab/radial.hpp"

using namespace pshlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// n B(n, p + 1): energy of chi = e^t - 1.
double exp_energy(int n, double p) {
  return n * std::exp(std::lgamma(n) + std::lgamma(p + 1.0) - std::lgamma(n + p + 1.0));
}

std::vector<Weight> full_mass_families() {
  return {Weight::power_alpha(0.3),  Weight::power_alpha(0.6), Weight::divisor_power(0.5),
          Weight::exp(),             Weight::softplus(),       Weight::translated_scaled(Weight::softplus(), 0.5, 4.0),
          Weight::tabulated(GridFunction{{-20, -10, -5, -2, -1, 0}, {-9, -6, -3.5, -1.5, -0.8, 0}})};
}

}  // namespace

TEST_SUITE("radial") {
  TEST_CASE("ball shift and volume constant") {
    CHECK(unit_ball_volume(1) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2));
    const RadialPotential sp(Weight::softplus(), 2);
    CHECK(sp.chi(0.0) == 0.0);
    CHECK(sp.shift() == doctest::Approx(std::log(2.0)));
    CHECK(RadialPotential(Weight::softplus(), 2, Model::Projective).shift() == 0.0);
    CHECK_THROWS_AS(RadialPotential(Weight::exp(), 0), InputError);
  }

  TEST_CASE("density integrates to the chi'^n increments") {
    for (const Weight& w : full_mass_families())
      for (int n : {1, 2, 3}) {
        INFO(w.describe() << " n=" << n);
        const RadialPotential rp(w, n);
        const ReducedDensity m = ma_pushforward(rp);
        for (auto [a, b] : {std::pair{-1e3, -10.0}, std::pair{-10.0, -1.0}, std::pair{-1.0, 0.0}}) {
          auto bps = rp.breakpoints();
          double acc = 0.0, lo = a;
          std::sort(bps.begin(), bps.end());
          for (double x : bps)
            if (x > a && x < b) {
              acc += integrate_interval(m, lo, x, 1e-12);
              lo = x;
            }
          acc += integrate_interval(m, lo, b, 1e-12);
          CHECK(std::abs(acc - m.mass(a, b)) <= 1e-6 * std::max(1.0, std::abs(m.mass(a, b))));
        }
      }
  }

  TEST_CASE("pole mass") {
    CHECK(pole_mass(RadialPotential(Weight::power_alpha(0.45), 2)) == 0.0);
    CHECK(pole_mass(RadialPotential(Weight::exp(), 3)) == 0.0);
    CHECK(pole_mass(RadialPotential(Weight::translated_scaled(Weight::softplus(), 0.25, 16), 2)) == 0.0);
    CHECK(pole_mass(RadialPotential(Weight::identity(), 2)) == doctest::Approx(1.0));
    CHECK_FALSE(in_full_mass_class(RadialPotential(Weight::identity(), 1)));
    CHECK(in_full_mass_class(RadialPotential(Weight::divisor_power(0.9), 2)));
  }

  TEST_CASE("entropy of the exponential weight in closed form") {
    // int m log f = 1 - log(2 sigma) for chi = e^t - 1.
    for (int n : {1, 2, 3}) {
      const auto v = entropy(RadialPotential(Weight::exp(), n), QuadConfig{});
      REQUIRE(v.finite());
      CHECK(v.value == doctest::Approx(1.0 - std::log(2.0 * unit_ball_volume(n))).epsilon(1e-7));
    }
  }

  TEST_CASE("entropy threshold for power weights") {
    // The criterion integrand behaves like (-t)^{n alpha - n}.
    const QuadConfig cfg;
    for (int n : {2, 3}) {
      const double crit = (n - 1.0) / n;
      for (double a : {crit - 0.2, crit - 0.1, crit + 0.05, crit + 0.15}) {
        INFO("n=" << n << " alpha=" << a);
        const auto ev = entropy_verdicts(RadialPotential(Weight::power_alpha(a), n), cfg);
        CHECK(ev.criterion.tail_exponent == doctest::Approx(n * a - n).epsilon(0.01));
        const VerdictKind want = a < crit ? VerdictKind::Finite : VerdictKind::Divergent;
        CHECK(ev.exact.kind == want);
        CHECK(ev.criterion.kind == want);
      }
    }
  }

  TEST_CASE("exact and criterion entropy agree across families") {
    const QuadConfig cfg;
    for (const Weight& w : full_mass_families())
      for (int n : {1, 2, 3}) {
        INFO(w.describe() << " n=" << n);
        EntropyVerdicts ev;
        CHECK_NOTHROW(ev = entropy_verdicts(RadialPotential(w, n), cfg));
        if (ev.exact.kind != VerdictKind::Inconclusive && ev.criterion.kind != VerdictKind::Inconclusive)
          CHECK(ev.exact.kind == ev.criterion.kind);
      }
  }

  TEST_CASE("pole atom makes entropy and energy divergent") {
    const RadialPotential id(Weight::identity(), 2);
    CHECK(entropy(id, QuadConfig{}).kind == VerdictKind::Divergent);
    CHECK(energy(id, 1.0, QuadConfig{}).kind == VerdictKind::Divergent);
    CHECK_THROWS_AS(mt_integral(id, 1.0, 1.0, QuadConfig{}), PreconditionError);
  }

  TEST_CASE("energy closed forms") {
    const QuadConfig cfg;
    CHECK(energy(RadialPotential(Weight::exp(), 2), 1.0, cfg).value == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    for (int n : {1, 2, 3})
      for (double p : {0.5, 1.0, 2.0, 3.5}) {
        const auto v = energy(RadialPotential(Weight::exp(), n), p, cfg);
        REQUIRE(v.finite());
        CHECK(v.value == doctest::Approx(exp_energy(n, p)).epsilon(1e-7));
      }
    CHECK_THROWS_AS(energy(RadialPotential(Weight::exp(), 2), 0.0, cfg), InputError);
  }

  TEST_CASE("energy threshold for power weights") {
    const QuadConfig cfg;
    const RadialPotential rp(Weight::power_alpha(0.45), 2);
    CHECK(energy(rp, 2.0, cfg).kind == VerdictKind::Finite);
    CHECK(energy(rp, 2.6, cfg).kind == VerdictKind::Divergent);
    // Energy tail exponent is alpha p + n alpha - n - 1.
    CHECK(energy(rp, 1.0, cfg).tail_exponent == doctest::Approx(0.45 + 0.9 - 3.0).epsilon(0.01));
  }

  TEST_CASE("critical energy exponent") {
    const QuadConfig cfg;
    // n (1 - alpha) / alpha
    CHECK(critical_p(RadialPotential(Weight::power_alpha(0.45), 2), cfg) ==
          doctest::Approx(2.0 * 0.55 / 0.45).epsilon(0.01));
    CHECK(critical_p(RadialPotential(Weight::power_alpha(0.6), 3), cfg) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(critical_p(RadialPotential(Weight::power_alpha(0.3), 2), cfg) ==
          doctest::Approx(2.0 * 0.7 / 0.3).epsilon(0.01));
    CHECK(critical_p(RadialPotential(Weight::exp(), 2), cfg) == kInf);
  }

  TEST_CASE("critical search falls back to bisection") {
    const auto step = [](double edge) {
      return [edge](double p) { return p < edge ? VerdictKind::Finite : VerdictKind::Divergent; };
    };
    CHECK(critical_by_bisection(step(3.3), std::numeric_limits<double>::quiet_NaN()) ==
          doctest::Approx(3.3).epsilon(2e-3));
    // A wrong power-law estimate is rejected.
    CHECK(critical_by_bisection(step(3.3), 1.0) == doctest::Approx(3.3).epsilon(2e-3));
    CHECK(critical_by_bisection(step(3.3), 3.3) == 3.3);
    CHECK(critical_by_bisection([](double) { return VerdictKind::Finite; }, 1.0) == kInf);
    CHECK_THROWS_AS(critical_by_bisection([](double) { return VerdictKind::Divergent; }, 1.0), PreconditionError);
  }

  TEST_CASE("exponential moments") {
    const QuadConfig cfg;
    for (int n : {1, 2}) {
      const RadialPotential rp(Weight::exp(), n);
      for (double k : {0.5, 3.0, 40.0}) {
        // u = e^t: 2n sigma int_0^1 u^{2n-1} e^{k(1-u)} du
        const double want = 2 * n * unit_ball_volume(n) *
                            integrate_interval([n, k](double u) { return std::pow(u, 2 * n - 1) * std::exp(k * (1 - u)); },
                                               0.0, 1.0, 1e-12);
        const auto v = exp_moment(rp, k, cfg);
        REQUIRE(v.finite());
        CHECK(v.value == doctest::Approx(want).epsilon(1e-7));
      }
    }
    // e^{-k chi} ~ e^{k |t|}: integrable against e^{2n t} iff k < 2n.
    const RadialPotential id(Weight::identity(), 2);
    CHECK(exp_moment(id, 3.0, cfg).finite());
    CHECK(exp_moment(id, 5.0, cfg).kind == VerdictKind::Divergent);
    CHECK_THROWS_AS(exp_moment(id, 0.0, cfg), InputError);
  }

  TEST_CASE("Moser-Trudinger integral") {
    const QuadConfig cfg;
    const RadialPotential rp(Weight::exp(), 2);
    const double e = exp_energy(2, 1.0);
    for (double c : {0.5, 3.6, 10.0}) {
      const double coef = c * std::pow(e, -0.5);
      const double want =
          4 * unit_ball_volume(2) *
          integrate_interval([coef](double u) { return u * u * u * std::exp(coef * std::pow(1 - u, 1.5)); }, 0.0,
                             1.0, 1e-12);
      const auto v = mt_integral(rp, 1.0, c, cfg);
      REQUIRE(v.finite());
      CHECK(v.value == doctest::Approx(want).epsilon(1e-6));
    }
    // alpha (1 + p/n) < 1 keeps every c finite for power weights.
    CHECK(mt_integral(RadialPotential(Weight::power_alpha(0.3), 2), 1.0, 3.6, cfg).finite());
    CHECK_THROWS_AS(mt_integral_given_energy(rp, 1.0, 1.0, 0.0, cfg), PreconditionError);
  }

  TEST_CASE("sublevel capacity and volume") {
    const RadialPotential rp(Weight::exp(), 2);
    for (double s : {0.1, 0.5, 0.9}) {
      const double ts = std::log(1 - s);
      CHECK(sublevel_radius_log(rp, s) == doctest::Approx(ts).epsilon(1e-9));
      CHECK(capacity_sublevel(rp, s) == doctest::Approx(std::pow(-ts, -2.0)).epsilon(1e-8));
      CHECK(volume_sublevel(rp, s) == doctest::Approx(unit_ball_volume(2) * std::pow(1 - s, 4)).epsilon(1e-8));
    }
    // 0.3 is the spot value reported by the capacity scenario.
    CHECK(capacity_sublevel(rp, 0.3) == doctest::Approx(std::pow(std::log(1 / 0.7), -2.0)).epsilon(1e-8));
    CHECK_THROWS_AS(capacity_sublevel(rp, 1.5), DomainError);
    CHECK_THROWS_AS(capacity_sublevel(rp, 0.0), DomainError);
    CHECK_THROWS_AS(capacity_sublevel(RadialPotential(Weight::exp(), 2, Model::Projective), 0.5), PreconditionError);
  }

  TEST_CASE("capacity decreases along the levels") {
    const RadialPotential rp(Weight::power_alpha(0.45), 2);
    double prev = kInf;
    for (double s = 0.5; s < 200; s *= 1.7) {
      const double cap = capacity_sublevel(rp, s);
      CHECK(cap < prev);
      prev = cap;
    }
  }

  TEST_CASE("distance proxy") {
    const QuadConfig cfg;
    const RadialPotential e(Weight::exp(), 2);
    const RadialPotential z(Weight::zero(), 2);
    CHECK(dp_proxy(e, e, 1.0, cfg).value == 0.0);
    // The zero potential carries no mass, so d_1(exp, 0) = E_1(exp).
    CHECK(dp_proxy(e, z, 1.0, cfg).value == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    const RadialPotential a(Weight::power_alpha(0.3), 2);
    const auto ab = dp_proxy(a, e, 1.0, cfg);
    const auto ba = dp_proxy(e, a, 1.0, cfg);
    CHECK(ab.value == doctest::Approx(ba.value).epsilon(1e-10));
    CHECK_THROWS_AS(dp_proxy(e, RadialPotential(Weight::exp(), 3), 1.0, cfg), InputError);
    CHECK_THROWS_AS(dp_proxy(e, RadialPotential(Weight::identity(), 2), 1.0, cfg), PreconditionError);
  }

  TEST_CASE("bounded weights") {
    CHECK(floor_bounded(Weight::exp()));
    CHECK(floor_bounded(Weight::softplus()));
    CHECK_FALSE(floor_bounded(Weight::power_alpha(0.1)));
    CHECK_FALSE(floor_bounded(Weight::identity()));
  }
}
