#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "pshlab/errors.hpp"
#include "pshlab/weights.hpp"

using namespace pshlab;

namespace {

std::vector<Weight> families() {
  return {Weight::power_alpha(0.3),
          Weight::power_alpha(0.45),
          Weight::power_alpha(0.8),
          Weight::divisor_power(0.2),
          Weight::divisor_power(0.5),
          Weight::exp(),
          Weight::softplus(),
          Weight::translated_scaled(Weight::softplus(), 0.25, 16.0),
          Weight::identity(),
          Weight::zero(),
          Weight::tabulated(GridFunction{{-20, -10, -5, -2, -1, 0}, {-9, -6, -3.5, -1.5, -0.8, 0}})};
}

// Central differences with a step scaled to |t|.
double fd1(const Weight& w, double t) {
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  return (w.value(t + h) - w.value(t - h)) / (2 * h);
}

double fd2(const Weight& w, double t) {
  const double h = 1e-5 * std::max(1.0, std::abs(t));
  return (w.d1(t + h) - w.d1(t - h)) / (2 * h);
}

bool near_joint(const Weight& w, double t) {
  for (double b : w.breakpoints())
    if (std::abs(t - b) < 1e-3 * std::max(1.0, std::abs(b))) return true;
  return false;
}

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("closed-form values") {
    CHECK(eval(Weight::power_alpha(0.5), -4.0) == doctest::Approx(-4.0).epsilon(1e-15));
    CHECK(eval(Weight::exp(), 0.0) == 0.0);
    CHECK(eval(Weight::divisor_power(0.5), -9.0) == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(deriv(Weight::power_alpha(0.5), -4.0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(deriv(Weight::power_alpha(0.5), -4.0, 2) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(deriv(Weight::exp(), 0.0, 2) == doctest::Approx(1.0));
    CHECK(deriv(Weight::softplus(), 0.0, 1) == doctest::Approx(0.5));
    CHECK(eval(Weight::softplus(), 0.0) == doctest::Approx(std::log(2.0)));
  }

  TEST_CASE("power families are exact below -1") {
    for (double a : {0.1, 0.45, 0.9})
      for (double t : {-1.0, -3.7, -1e3, -1e6}) {
        CHECK(Weight::power_alpha(a).value(t) == doctest::Approx(-std::pow(-t, a) / a).epsilon(1e-14));
        CHECK(Weight::divisor_power(a).value(t) == doctest::Approx(-std::pow(-t, a)).epsilon(1e-14));
      }
  }

  TEST_CASE("blend is continuous to first order at -1") {
    for (const Weight& w : {Weight::power_alpha(0.3), Weight::power_alpha(0.7), Weight::divisor_power(0.4)}) {
      const double e = 1e-12;
      CHECK(std::abs(w.value(-1 - e) - w.value(-1 + e)) < 1e-9);
      CHECK(std::abs(w.d1(-1 - e) - w.d1(-1 + e)) < 1e-9);
    }
    // blend curvature is 1 - alpha on [-1, 0]
    CHECK(Weight::power_alpha(0.3).d2(-0.5) == doctest::Approx(0.7));
  }

  TEST_CASE("monotone and convex on a log probe grid") {
    for (const Weight& w : families()) {
      INFO(w.describe());
      for (double t : negative_logspace(w.t_floor(), -1e-3, 400)) {
        CHECK(deriv(w, t, 1) >= -1e-12);
        CHECK(deriv(w, t, 2) >= -1e-12);
      }
    }
  }

  TEST_CASE("nonpositive on t <= 0 after the boundary shift") {
    for (const Weight& w : families()) {
      INFO(w.describe());
      const double top = w.value(0.0);
      for (double t : negative_logspace(-1e5, -1e-3, 200)) CHECK(w.value(t) - top <= 1e-15);
    }
    // Only the kink families are positive without the shift.
    CHECK(Weight::exp().value(-3.0) < 0.0);
    CHECK(Weight::softplus().value(-3.0) > 0.0);
  }

  TEST_CASE("derivatives agree with finite differences away from joints") {
    for (const Weight& w : families()) {
      INFO(w.describe());
      for (double t : negative_logspace(-1e4, -1e-2, 97)) {
        if (near_joint(w, t)) continue;
        CHECK(std::abs(w.d1(t) - fd1(w, t)) / (1 + std::abs(w.d1(t))) <= 1e-5);
        CHECK(std::abs(w.d2(t) - fd2(w, t)) / (1 + std::abs(w.d2(t))) <= 1e-5);
      }
    }
  }

  TEST_CASE("translated-scaled identity") {
    const Weight base = Weight::softplus();
    for (double eps : {0.5, 0.25, 1.0 / 64})
      for (double c : {4.0, 16.0, 4096.0}) {
        const Weight w = Weight::translated_scaled(base, eps, c);
        for (double t : linspace(-3 * c, -c, 41)) {
          CHECK(w.value(t) == eps * base.value(t + c) - eps * c);
          CHECK(w.d1(t) == doctest::Approx(eps * base.d1(t + c)).epsilon(1e-14));
        }
      }
  }

  TEST_CASE("tabulated weights interpolate nodes and stay convex") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      // Random convex nondecreasing samples from random increasing slopes.
      GridFunction g;
      double t = -30.0, v = -5.0, slope = 0.0;
      for (int i = 0; i < 12; ++i) {
        g.ts.push_back(t);
        g.vals.push_back(v);
        slope += u(rng);
        const double h = 0.2 + 3.0 * u(rng);
        t += h;
        v += slope * h;
      }
      const Weight w = Weight::tabulated(g);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(w.value(g.ts[i]) == doctest::Approx(g.vals[i]).epsilon(1e-12));
      for (double s : linspace(g.ts.front() - 5, g.ts.back() + 5, 500)) {
        CHECK(w.d1(s) >= -1e-12);
        CHECK(w.d2(s) >= 0.0);
      }
      // slope continuity across nodes
      for (std::size_t i = 1; i + 1 < g.size(); ++i)
        CHECK(std::abs(w.d1(g.ts[i] - 1e-9) - w.d1(g.ts[i] + 1e-9)) < 1e-6);
    }
  }

  TEST_CASE("tabulated rejects non-convex or decreasing data") {
    CHECK_THROWS_AS(Weight::tabulated(GridFunction{{-3, -2, -1}, {0, -1, -1.5}}), InputError);
    CHECK_THROWS_AS(Weight::tabulated(GridFunction{{-3, -2, -1}, {-3, -1, -0.5}}), InputError);
    CHECK_THROWS_AS(Weight::tabulated(GridFunction{{-3, -3, -1}, {-3, -2, -1}}), InputError);
  }

  TEST_CASE("identity table is chi(t) = t") {
    const Weight id = Weight::identity();
    for (double t : {-1e6, -50.0, -10.0, -3.0, -1.0, 0.0}) {
      CHECK(id.value(t) == doctest::Approx(t));
      CHECK(id.d1(t) == doctest::Approx(1.0));
      CHECK(id.d2(t) == 0.0);
    }
  }

  TEST_CASE("parse and describe round trip") {
    for (const char* spec : {"power:0.45", "divpower:0.5", "exp", "softplus", "ts:softplus:0.25:16",
                             "ts:power:0.3:0.5:8", "identity", "zero"}) {
      const Weight w = Weight::parse(spec);
      CHECK(w.describe() == spec);
      CHECK(Weight::parse(w.describe()).value(-7.5) == w.value(-7.5));
    }
    CHECK(Weight::parse("power:0.45").value(-1e3) == Weight::power_alpha(0.45).value(-1e3));
  }

  TEST_CASE("tab: spec reads a csv table") {
    const std::string path = "weights_table_test.csv";
    {
      std::ofstream out(path);
      out << "t,chi\n-10,-10\n-4,-4\n-1,-1\n";
    }
    const Weight w = Weight::parse("tab:" + path);
    CHECK(w.value(-4.0) == doctest::Approx(-4.0));
    CHECK(w.describe() == "tab:" + path);
    std::remove(path.c_str());
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(eval(Weight::exp(), 0.5), DomainError);
    CHECK_THROWS_AS(deriv(Weight::exp(), 1.0, 1), DomainError);
    CHECK_THROWS_AS(deriv(Weight::exp(), -1.0, 3), InputError);
    CHECK_THROWS_AS(Weight::power_alpha(1.0), InputError);
    CHECK_THROWS_AS(Weight::divisor_power(0.0), InputError);
    CHECK_THROWS_AS(Weight::parse("power"), InputError);
    CHECK_THROWS_AS(Weight::parse("power:abc"), InputError);
    CHECK_THROWS_AS(Weight::parse("cosh"), InputError);
    CHECK_THROWS_AS(Weight::parse("tab:/nonexistent/file.csv"), InputError);
    CHECK_THROWS_AS(Weight::exp().with_floor(10.0), InputError);
  }

  TEST_CASE("compose_power") {
    const std::vector<double> ts = linspace(-10, -1, 10);
    const GridFunction g = compose_power(Weight::identity(), 2.0, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK(g.vals[i] == doctest::Approx(-ts[i] * ts[i]));
    CHECK(compose_power(Weight::power_alpha(0.5), 2.0, {-4.0, -1.0}).vals[0] == doctest::Approx(-16.0));
    CHECK(compose_power(Weight::exp(), 1.5, {-1.0, 0.0}).vals[1] == 0.0);
    CHECK_THROWS_AS(compose_power(Weight::softplus(), 2.0, ts), PoleError);
    CHECK_THROWS_AS(compose_power(Weight::exp(), 1.0, ts), InputError);
  }

  TEST_CASE("grid helpers") {
    const auto ls = negative_logspace(-1e3, -1e-3, 7);
    CHECK(ls.front() == doctest::Approx(-1e3));
    CHECK(ls.back() == doctest::Approx(-1e-3));
    CHECK(ls[3] == doctest::Approx(-1.0));
    CHECK_THROWS_AS(negative_logspace(-1.0, 1.0, 5), InputError);
    CHECK_THROWS_AS((GridFunction{{0.0}, {1.0}}.validate()), InputError);
    CHECK_THROWS_AS((GridFunction{{0.0, 1.0}, {1.0, NAN}}.validate()), InputError);
  }
}
