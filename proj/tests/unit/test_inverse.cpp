#include <cmath>

#include "../support.hpp"
#include "doctest.h"
#include "stdgm/error.hpp"
#include "stdgm/inverse.hpp"

using namespace stdgm;
using testing::cplx;

namespace {

FrequencyGrid grid_t(int T) {
  FrequencyGrid g = FrequencyGrid::defaults(T);
  g.p_max = 4;
  g.q_min = -3;
  g.q_max = 3;
  return g;
}

SpectralField smoothed_field(int d, int T, std::uint64_t seed) {
  const auto p = testing::uniform_pattern(d, T, 150, seed);
  return smooth_spectra(periodogram_matrix(dft_separable(p, grid_t(T))), {1, 1, 0});
}

}  // namespace

TEST_CASE("lag grid indexing") {
  const auto lags = LagGrid::conjugate_to(grid_t(4));
  CHECK(lags.na() == 9);
  CHECK(lags.nb() == 7);
  CHECK(lags.h_min == -1);
  CHECK(lags.cx(2) == doctest::Approx(2.0 / 9.0));
  for (std::size_t k = 0; k < lags.size(); k += 13) {
    int a, b, h;
    lags.lag(k, a, b, h);
    CHECK(lags.index(a, b, h) == k);
  }
}

TEST_CASE("symmetrised spectrum obeys f(-w) = conj f(w)") {
  const auto f = smoothed_field(3, 4, 2);
  const auto entry = f.entry(0, 1);
  const auto s = symmetrise(f.grid, entry);
  for (int p = 1; p <= s.P; ++p)
    for (int q = -s.Q; q <= s.Q; ++q)
      for (int u = f.grid.u_min; u <= f.grid.u_max; ++u) {
        int mu = -u;
        if (mu < f.grid.u_min) mu += 4;
        if (mu > f.grid.u_max) mu -= 4;
        CHECK(s.values[s.index(-p, -q, mu)] == std::conj(s.values[s.index(p, q, u)]));
      }
}

TEST_CASE("inverse sum against a direct long double evaluation") {
  const auto f = smoothed_field(3, 5, 9);
  const auto s = symmetrise(f.grid, f.entry(0, 2));
  const auto lag = inverse_sum(s);
  const LagGrid lags = LagGrid::conjugate_to(f.grid);
  const long double two_pi = 6.283185307179586476925286766559L;
  for (const auto& [a, b, h] : {std::array<int, 3>{0, 0, 0}, {1, -2, 2}, {-4, 3, -1}, {3, 0, 1}}) {
    std::complex<long double> acc = 0;
    for (int p = -s.P; p <= s.P; ++p)
      for (int q = -s.Q; q <= s.Q; ++q)
        for (int u = s.u_min; u < s.u_min + s.steps; ++u) {
          const long double ph = static_cast<long double>(p) * a / s.np() + static_cast<long double>(q) * b / s.nq() +
                                 static_cast<long double>(u) * h / s.steps;
          const auto v = s.values[s.index(p, q, u)];
          acc += std::complex<long double>(v.real(), v.imag()) * std::polar(1.0L, two_pi * ph);
        }
      acc /= static_cast<long double>(s.size());
    const cplx got = lag[lags.index(a, b, h)];
    CHECK(std::abs(got.real() - static_cast<double>(acc.real())) < 1e-12);
    CHECK(std::abs(got.imag()) < 1e-12);
  }
}

TEST_CASE("forward of inverse reproduces the symmetrised field") {
  const auto f = smoothed_field(3, 4, 5);
  const auto s = symmetrise(f.grid, f.entry(1, 2));
  const auto back = forward_sum(LagGrid::conjugate_to(f.grid), inverse_sum(s));
  double scale = 0.0, err = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    scale = std::max(scale, std::abs(s.values[k]));
    err = std::max(err, std::abs(back.values[k] - s.values[k]));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("complete and partial lag fields") {
  const auto f = smoothed_field(4, 4, 6);
  const auto cc = inverse_transform(f);
  CHECK(cc.auto_terms.series.size() == 4);
  CHECK(cc.cross_terms.series.size() == 6);
  CHECK(cc.auto_terms.kind == LagKind::complete_auto);
  for (const auto& s : cc.auto_terms.series) {
    CHECK(s.i == s.j);
    CHECK(s.zero_lag == s.values[cc.auto_terms.grid.index(0, 0, 0)]);
    // Zero lag of an auto term is the mean of a positive spectrum.
    CHECK(s.zero_lag > 0.0);
  }
  const auto pl = partial_lag_characteristics(f, 0, 1, {3});
  CHECK(pl.partial_auto.conditioning == "{4}");
  CHECK(pl.partial_cross.conditioning == "{3,4}");
  const std::vector<double> lambda{4.0, 9.0, 1.0, 1.0};
  const auto sc = scaled_covariance(cc.cross_terms, lambda);
  CHECK(sc.kind == LagKind::scaled);
  CHECK(sc.series[0].zero_lag == doctest::Approx(cc.cross_terms.series[0].zero_lag / 6.0));
  CHECK_THROWS_AS(scaled_covariance(cc.cross_terms, std::vector<double>{1.0}), Error);
}

TEST_CASE("symmetry preconditions") {
  auto g = grid_t(4);
  g.q_min = -2;
  const auto f = testing::random_field(g, 2, 1);
  try {
    (void)inverse_transform(f);
    FAIL("asymmetric q range must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::symmetry);
  }
  auto partial = grid_t(4);
  partial.u_min = 0;
  CHECK_THROWS_AS(inverse_transform(testing::random_field(partial, 2, 1)), Error);

  // Independent random matrices break conjugate symmetry on the p = 0 plane.
  try {
    (void)inverse_transform(testing::random_field(grid_t(4), 2, 1));
    FAIL("p = 0 plane violation must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::symmetry);
  }
}
