#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pshlab/envelopes.hpp"
#include "pshlab/errors.hpp"

using namespace pshlab;

namespace {

// Brute force: the largest convex nondecreasing minorant is the convex
// minorant of the right running minimum m_i = min_{j >= i} g_j, whose value at
// node i is the smallest chord of m over pairs j <= i <= k.
std::vector<double> brute_envelope(const GridFunction& g) {
  const std::size_t n = g.size();
  std::vector<double> m(g.vals);
  for (std::size_t i = n - 1; i-- > 0;) m[i] = std::min(m[i], m[i + 1]);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = m[i];
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = i; k < n; ++k) {
        if (j == k) continue;
        const double w = (g.ts[i] - g.ts[j]) / (g.ts[k] - g.ts[j]);
        best = std::min(best, (1 - w) * m[j] + w * m[k]);
      }
    env[i] = best;
  }
  return env;
}

GridFunction random_input(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridFunction g;
  g.ts = linspace(-5.0, 0.0, size);
  for (double t : g.ts) g.vals.push_back(0.3 * t * t + std::sin(3 * t) + 0.5 * u(rng));
  return g;
}

bool convex_nondecreasing(const GridFunction& e) {
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    const double s = (e.vals[i + 1] - e.vals[i]) / (e.ts[i + 1] - e.ts[i]);
    if (s < prev - 1e-9 * (1 + std::abs(prev))) return false;
    prev = std::max(prev, s);
  }
  return true;
}

}  // namespace

TEST_SUITE("envelopes") {
  TEST_CASE("admissible input is its own envelope") {
    GridFunction g;
    g.ts = linspace(-8.0, 0.0, 257);
    for (double t : g.ts) g.vals.push_back(std::expm1(t));
    const auto r = convex_increasing_minorant(g, 2);
    CHECK(r.env.vals == g.vals);
    CHECK(std::all_of(r.contact.begin(), r.contact.end(), [](bool c) { return c; }));
    CHECK(r.off_contact_ma() == 0.0);
    // 2 s_L (s_R - s_L) = s_R^2 - s_L^2 - (s_R - s_L)^2 telescopes over the cells.
    std::vector<double> s;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) s.push_back((g.vals[i + 1] - g.vals[i]) / (g.ts[i + 1] - g.ts[i]));
    double want = s.back() * s.back() - s.front() * s.front();
    for (std::size_t i = 1; i < s.size(); ++i) want -= (s[i] - s[i - 1]) * (s[i] - s[i - 1]);
    CHECK(r.total_ma() == doctest::Approx(want).epsilon(1e-9));
  }

  TEST_CASE("concave parabola becomes its chord") {
    GridFunction g;
    g.ts = linspace(-10.0, -1.0, 91);
    for (double t : g.ts) g.vals.push_back(-t * t);
    const auto r = convex_increasing_minorant(g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.env.vals[i] == doctest::Approx(11 * g.ts[i] + 10));
    CHECK(r.contact.front());
    CHECK(r.contact.back());
    CHECK(std::count(r.contact.begin(), r.contact.end(), true) == 2);
  }

  TEST_CASE("matches the brute-force minorant") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
      const GridFunction g = random_input(rng, 40 + trial);
      const auto r = convex_increasing_minorant(g);
      const auto want = brute_envelope(g);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.env.vals[i] == doctest::Approx(want[i]).epsilon(1e-10));
    }
  }

  TEST_CASE("dip is bridged") {
    GridFunction g;
    g.ts = linspace(-6.0, 0.0, 600);
    for (double t : g.ts) g.vals.push_back(std::min(std::expm1(t), std::exp(t + 2.0) - 1.5));
    const auto r = convex_increasing_minorant(g, 2);
    const auto want = brute_envelope(g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.env.vals[i] == doctest::Approx(want[i]).epsilon(1e-10));
    // The concave kink near log(0.5 / (e^2 - 1)) is off the contact set.
    const double kink = std::log(0.5 / (std::exp(2.0) - 1.0));
    const auto at = std::lower_bound(g.ts.begin(), g.ts.end(), kink) - g.ts.begin();
    CHECK_FALSE(r.contact[at]);
    CHECK(r.off_contact_ma() <= 1e-8 * r.total_ma());
  }

  TEST_CASE("envelope properties on random inputs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const GridFunction g = random_input(rng, 200);
      const auto r = convex_increasing_minorant(g, 2);
      INFO("trial " << trial);
      CHECK(convex_nondecreasing(r.env));
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.env.vals[i] <= g.vals[i] + 1e-12);
      // mass lives on the contact set
      CHECK(r.off_contact_ma() <= 1e-8 * std::max(r.total_ma(), 1e-300));
      // exact idempotence
      CHECK(convex_increasing_minorant(r.env, 2).env.vals == r.env.vals);
      // monotone in the obstacle
      GridFunction up = g;
      for (double& v : up.vals) v += u(rng);
      const auto ru = convex_increasing_minorant(up, 2);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(ru.env.vals[i] >= r.env.vals[i] - 1e-12);
      // maximal among random convex nondecreasing minorants
      for (int c = 0; c < 20; ++c) {
        const double m = 2 * u(rng), tau = -6 + 6 * u(rng), m2 = 2 * u(rng), tau2 = -6 + 6 * u(rng);
        std::vector<double> cand;
        double lift = -1e300;
        for (std::size_t i = 0; i < g.size(); ++i) {
          cand.push_back(std::max({0.0, m * (g.ts[i] - tau), m2 * (g.ts[i] - tau2)}));
          lift = std::max(lift, cand.back() - g.vals[i]);
        }
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(cand[i] - lift <= r.env.vals[i] + 1e-10);
      }
    }
  }

  TEST_CASE("left flattening") {
    // Decreasing then increasing: flat at the minimum to the left.
    GridFunction g;
    g.ts = linspace(-4.0, 0.0, 81);
    for (double t : g.ts) g.vals.push_back((t + 2) * (t + 2));
    const auto r = convex_increasing_minorant(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(r.env.vals[i] == doctest::Approx(g.ts[i] <= -2 ? 0.0 : g.vals[i]).scale(1.0));
  }

  TEST_CASE("full mass test for powers of the potential") {
    const auto pw = envelope_power(RadialPotential(Weight::power_alpha(0.45), 2), 1.5);
    REQUIRE(pw.left_slopes.size() == 3);
    CHECK(pw.left_slopes[0] > pw.left_slopes[1]);
    CHECK(pw.left_slopes[1] > pw.left_slopes[2]);
    CHECK(pw.slope_decay < -0.05);
    CHECK(pw.full_mass);
    // -(-t)^2 keeps a linear part at every scale.
    const auto id = envelope_power(RadialPotential(Weight::identity(), 2), 2.0);
    CHECK(id.slope_decay == doctest::Approx(1.0).epsilon(0.05));
    CHECK_FALSE(id.full_mass);
    const auto ex = envelope_power(RadialPotential(Weight::exp(), 2), 2.0);
    CHECK(ex.full_mass);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(convex_increasing_minorant(GridFunction{{-1.0, -1.0, 0.0}, {0.0, 1.0, 2.0}}), InputError);
    CHECK_THROWS_AS(convex_increasing_minorant(GridFunction{{-1.0, 0.0}, {0.0, 1.0}}, 0), InputError);
    const RadialPotential rp(Weight::exp(), 2);
    CHECK_THROWS_AS(compose_power(rp, 2.0, {-1.0, 0.5}), DomainError);
    CHECK_THROWS_AS(compose_power(rp, 1.0, {-1.0, 0.0}), InputError);
    CHECK_THROWS_AS(compose_power(RadialPotential(Weight::softplus(), 2, Model::Projective), 2.0, {-1.0, 0.0}),
                    PoleError);
    CHECK_THROWS_AS(envelope_power(rp, 2.0, EnvelopeGrid{-1.0, -10.0, 100}), InputError);
  }
}
