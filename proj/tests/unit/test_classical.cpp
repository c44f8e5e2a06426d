#include <cmath>
#include <numbers>

#include "../support.hpp"
#include "doctest.h"
#include "stdgm/classical.hpp"
#include "stdgm/error.hpp"

using namespace stdgm;

namespace {

// Midpoint rule over the triangular density of D on (-1, 1).
template <typename F>
double triangular_expectation(F f, int n = 200000) {
  double s = 0.0;
  const double h = 2.0 / n;
  for (int k = 0; k < n; ++k) {
    const double x = -1.0 + (k + 0.5) * h;
    s += f(x) * (1.0 - std::abs(x)) * h;
  }
  return s;
}

double epan(double x, double h) { return std::abs(x) < h ? 0.75 / h * (1.0 - (x / h) * (x / h)) : 0.0; }

// O(n^2) K estimate, homogeneous plug-in, no edge correction.
double brute_k(const MultiPattern& p, double r, double t) {
  const auto n = p.counts();
  const double T = p.steps();
  double s = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (a == b) continue;
      const auto& ea = p.events[a];
      const auto& eb = p.events[b];
      if (std::hypot(ea.x - eb.x, ea.y - eb.y) > r) continue;
      const int k = eb.step - ea.step;
      const double ind = triangular_expectation([&](double x) { return std::abs(k + x) <= t ? 1.0 : 0.0; }, 20000);
      s += ind / ((n[static_cast<std::size_t>(ea.type)] / T) * (n[static_cast<std::size_t>(eb.type)] / T));
    }
  const double nu = static_cast<double>(p.components() * p.components());
  return s / (1.0 * T * nu);
}

}  // namespace

TEST_CASE("temporal indicator and kernel match numerical integration") {
  for (int k : {-3, -1, 0, 1, 2, 4})
    for (double t : {0.3, 1.0, 1.7, 2.5}) {
      const double ind = triangular_expectation([&](double x) { return std::abs(k + x) <= t ? 1.0 : 0.0; });
      CHECK(temporal_indicator(k, t) == doctest::Approx(ind).epsilon(1e-6));
      for (double delta : {0.25, 0.6}) {
        const double ker = triangular_expectation([&](double x) { return epan(std::abs(k + x) - t, delta); });
        CHECK(temporal_kernel(k, t, delta) == doctest::Approx(ker).epsilon(1e-6));
      }
    }
  CHECK(temporal_indicator(0, 1.0) == doctest::Approx(1.0));
  CHECK(temporal_indicator(5, 1.0) == 0.0);
}

TEST_CASE("spatial intensity integrates to n") {
  const auto p = testing::uniform_pattern(2, 3, 250, 31);
  for (double bw : {0.02, 0.08, 0.3}) {
    const auto s = estimate_spatial_intensity(p, bw, 48);
    CHECK(s.integral() == doctest::Approx(500.0).epsilon(1e-9));
    const auto one = estimate_spatial_intensity(p, bw, 48, {1});
    CHECK(one.integral() == doctest::Approx(250.0).epsilon(1e-9));
    for (double v : s.values) CHECK(v >= 0.0);
  }
  const auto s = estimate_spatial_intensity(p, 0.1, 32);
  CHECK(s.lookup(0.999, 0.001) == s.at(31, 0));
  CHECK_THROWS_AS(estimate_spatial_intensity(p, -1.0), Error);
}

TEST_CASE("temporal and space-time intensities conserve mass") {
  const auto p = testing::uniform_pattern(3, 6, 100, 2);
  const auto t = estimate_temporal_intensity(p, 1.2);
  REQUIRE(t.size() == 6);
  double total = 0.0;
  for (double v : t) total += v;
  CHECK(total == doctest::Approx(300.0).epsilon(1e-9));
  CHECK(estimate_separable_intensity(p, 0.1, 1.0, 24).integral() == doctest::Approx(300.0).epsilon(1e-9));
  CHECK(estimate_nonseparable_intensity(p, 0.1, 1.0, 24).integral() == doctest::Approx(300.0).epsilon(1e-9));
}

TEST_CASE("Scott's rule") {
  const auto p = testing::uniform_pattern(2, 4, 200, 3);
  double mx = 0, my = 0, mt = 0;
  const double n = 400;
  for (const auto& e : p.events) {
    mx += e.x / n;
    my += e.y / n;
    mt += e.step / n;
  }
  double vx = 0, vy = 0, vt = 0;
  for (const auto& e : p.events) {
    vx += (e.x - mx) * (e.x - mx) / (n - 1);
    vy += (e.y - my) * (e.y - my) / (n - 1);
    vt += (e.step - mt) * (e.step - mt) / (n - 1);
  }
  CHECK(scott_spatial_bandwidth(p) == doctest::Approx(std::sqrt((vx + vy) / 2) * std::pow(n, -1.0 / 6)));
  CHECK(scott_temporal_bandwidth(p) == doctest::Approx(std::sqrt(vt) * std::pow(n, -0.2)));
}

TEST_CASE("K estimate matches the brute-force double sum") {
  const auto p = testing::uniform_pattern(2, 3, 90, 77);
  SecondOrderOptions o;
  o.edge = EdgeCorrection::none;
  const std::vector<double> rs{0.05, 0.12}, ts{0.5, 1.5};
  const auto k = estimate_marked_K(p, {}, {}, rs, ts, o);
  CHECK(k.kind == CurveKind::marked_K);
  for (std::size_t ir = 0; ir < rs.size(); ++ir)
    for (std::size_t it = 0; it < ts.size(); ++it) CHECK(k.at(ir, it) == doctest::Approx(brute_k(p, rs[ir], ts[it])).epsilon(1e-4));
}

TEST_CASE("K is near 2 pi r^2 t for Poisson patterns with border correction") {
  double mean = 0.0;
  const int reps = 10;
  for (int s = 0; s < reps; ++s) {
    const auto p = testing::uniform_pattern(2, 10, 1500, 100 + s);
    mean += estimate_marked_K(p, {0}, {1}, {0.1}, {2.0}).at(0, 0) / reps;
  }
  CHECK(mean == doctest::Approx(2 * std::numbers::pi * 0.01 * 2.0).epsilon(0.05));
}

TEST_CASE("border cells without an eligible region are NaN") {
  const auto p = testing::uniform_pattern(2, 4, 100, 1);
  const auto k = estimate_marked_K(p, {}, {}, {0.05, 0.6}, {1.0, 2.0});
  CHECK_FALSE(std::isnan(k.at(0, 0)));
  CHECK(std::isnan(k.at(0, 1)));
  CHECK(std::isnan(k.at(1, 0)));
}

TEST_CASE("pair correlation is near one for Poisson patterns") {
  double mean = 0.0;
  const int reps = 8;
  for (int s = 0; s < reps; ++s) {
    const auto p = testing::uniform_pattern(2, 10, 1500, 300 + s);
    mean += estimate_pair_correlation(p, {}, {0.08}, {2.0}, 0.02, 0.5).at(0, 0) / reps;
  }
  CHECK(mean == doctest::Approx(1.0).epsilon(0.08));
  const auto p = testing::uniform_pattern(2, 4, 50, 1);
  CHECK_THROWS_AS(estimate_pair_correlation(p, {}, {0.01}, {1.0}, 0.02, 0.25), Error);
  CHECK_THROWS_AS(estimate_pair_correlation(p, {}, {0.05}, {0.2}, 0.02, 0.25), Error);
}

TEST_CASE("mark-weighted K") {
  auto p = testing::uniform_pattern(2, 4, 200, 5, true);
  auto c = p;
  for (auto& e : c.events) e.mark = 3.0;
  const auto zero = estimate_mark_weighted_K(c, 0, {0.1}, {1.0});
  CHECK(zero.at(0, 0) == 0.0);
  const auto w = estimate_mark_weighted_K(p, 1, {0.1}, {1.0});
  CHECK(w.kind == CurveKind::mark_weighted_K);
  CHECK(std::isfinite(w.at(0, 0)));
  p.has_marks = false;
  CHECK_THROWS_AS(estimate_mark_weighted_K(p, 0, {0.1}, {1.0}), Error);
}

TEST_CASE("kernel plug-in intensity gives similar K on homogeneous data") {
  const auto p = testing::uniform_pattern(2, 10, 1500, 9);
  SecondOrderOptions kern;
  kern.intensity.kind = IntensityPlugin::Kind::separable_kernel;
  kern.intensity.cells = 32;
  const double a = estimate_marked_K(p, {}, {}, {0.1}, {2.0}).at(0, 0);
  const double b = estimate_marked_K(p, {}, {}, {0.1}, {2.0}, kern).at(0, 0);
  CHECK(b == doctest::Approx(a).epsilon(0.1));
}
