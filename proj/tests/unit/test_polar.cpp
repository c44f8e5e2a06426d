#include <cmath>
#include <map>

#include "doctest.h"
#include "stdgm/polar.hpp"

using namespace stdgm;

TEST_CASE("theta bands at hand-picked directions") {
  CHECK(theta_band(0, 1) == 0);    // 0 degrees
  CHECK(theta_band(1, 0) == 9);    // 90 degrees
  CHECK(theta_band(1, 1) == 4);    // 45 degrees lies in (35, 45]
  CHECK(theta_band(1, -1) == 13);  // 135 degrees lies in (125, 135]
  CHECK(theta_band(0, -1) == 0);   // 180 wraps to 0
  CHECK(theta_band(5, 100) == 0);  // 2.86 degrees
  CHECK(theta_band(1, -100) == 0);  // 179.4 degrees lies in (175, 185]
}

TEST_CASE("radius bins") {
  CHECK(radius_bin(1, 0) == 1);
  CHECK(radius_bin(1, 1) == 2);
  CHECK(radius_bin(3, 4) == 5);
  CHECK(radius_bin(16, 16) == 23);
}

TEST_CASE("polar averages agree with a direct tally") {
  FrequencyGrid grid = FrequencyGrid::defaults(3);
  std::vector<double> field(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto w = grid.point(g);
    field[g] = std::sin(0.3 * w.p) + 0.1 * w.q + w.u;
  }
  const auto r = r_spectrum(grid, field);
  const auto t = theta_spectrum(grid, field);
  CHECK(r.kind == PolarSpectrum::Kind::radial);
  CHECK(t.abscissa.size() == 18);
  CHECK(t.abscissa[17] == 170.0);
  std::map<std::pair<int, int>, std::pair<double, int>> rt, tt;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto w = grid.point(g);
    if (w.p == 0 && w.q == 0) continue;
    double rr = std::sqrt(double(w.p * w.p + w.q * w.q));
    int rb = 1;
    while (rb < rr) ++rb;
    auto& a = rt[{w.u, rb - 1}];
    a.first += field[g];
    ++a.second;
    double deg = std::atan2(double(w.p), double(w.q)) * 180.0 / M_PI;
    if (deg < 0) deg += 180.0;
    if (deg >= 180.0) deg -= 180.0;
    int band = 0;
    for (int b = 0; b < 18; ++b) {
      const double lo = 10.0 * b - 5.0;
      if ((deg > lo && deg <= lo + 10.0) || (b == 0 && deg > 175.0)) band = b;
    }
    auto& c = tt[{w.u, band}];
    c.first += field[g];
    ++c.second;
  }
  for (std::size_t ui = 0; ui < r.u_values.size(); ++ui) {
    for (std::size_t b = 0; b < r.abscissa.size(); ++b) {
      const auto it = rt.find({r.u_values[ui], int(b)});
      const int n = it == rt.end() ? 0 : it->second.second;
      CHECK(r.counts[ui][b] == n);
      CHECK(r.values[ui][b] == doctest::Approx(n ? it->second.first / n : 0.0));
    }
    for (std::size_t b = 0; b < 18; ++b) {
      const auto it = tt.find({t.u_values[ui], int(b)});
      const int n = it == tt.end() ? 0 : it->second.second;
      CHECK(t.counts[ui][b] == n);
      CHECK(t.values[ui][b] == doctest::Approx(n ? it->second.first / n : 0.0));
    }
  }
}
