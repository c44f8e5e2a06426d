#pragma once

// Helpers shared by the unit and acceptance tests. Random inputs come from
// std::mt19937_64 so that they do not depend on the library's own generator.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "stdgm/pattern.hpp"
#include "stdgm/spectra.hpp"

namespace testing {

using cplx = std::complex<double>;

/// Uniform pattern on the unit square with `per_component` events per type spread over T steps.
inline stdgm::MultiPattern uniform_pattern(int d, int T, int per_component, std::uint64_t seed, bool marks = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> step(1, T);
  std::normal_distribution<double> mark(5.0, 1.0);
  stdgm::MultiPattern p;
  for (int c = 0; c < d; ++c) p.labels.push_back(std::to_string(c + 1));
  p.window = {0.0, 1.0, 0.0, 1.0, T};
  p.unit_square = true;
  p.has_marks = marks;
  for (int c = 0; c < d; ++c)
    for (int k = 0; k < per_component; ++k) {
      const double x = u(rng), y = u(rng);
      const int s = step(rng);
      p.events.push_back({x, y, s, c, marks ? mark(rng) : 0.0});
    }
  return p;
}

/// Random Hermitian positive-definite d x d matrix, row-major: B B^H + 0.1 I.
inline std::vector<cplx> random_hpd(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> b(static_cast<std::size_t>(d * d));
  for (auto& v : b) v = {g(rng), g(rng)};
  std::vector<cplx> a(b.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < d; ++k) s += b[static_cast<std::size_t>(i * d + k)] * std::conj(b[static_cast<std::size_t>(j * d + k)]);
      a[static_cast<std::size_t>(i * d + j)] = s + (i == j ? 0.1 : 0.0);
    }
  for (int i = 0; i < d; ++i) a[static_cast<std::size_t>(i * d + i)] = a[static_cast<std::size_t>(i * d + i)].real();
  return a;
}

/// Field of independent random HPD matrices on a grid.
inline stdgm::SpectralField random_field(const stdgm::FrequencyGrid& grid, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<cplx> values;
  values.reserve(grid.size() * static_cast<std::size_t>(d * d));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto m = random_hpd(d, rng);
    values.insert(values.end(), m.begin(), m.end());
  }
  return stdgm::SpectralField::from_matrices(grid, d, std::move(values));
}

/// Gauss-Jordan inverse with full pivoting in long double.
inline std::vector<std::complex<long double>> gauss_jordan_inverse(const std::vector<cplx>& a, int d) {
  using C = std::complex<long double>;
  std::vector<C> m(static_cast<std::size_t>(d * 2 * d), C(0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m[static_cast<std::size_t>(i * 2 * d + j)] = C(a[static_cast<std::size_t>(i * d + j)]);
    m[static_cast<std::size_t>(i * 2 * d + d + i)] = 1;
  }
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r)
      if (std::abs(m[static_cast<std::size_t>(r * 2 * d + c)]) > std::abs(m[static_cast<std::size_t>(piv * 2 * d + c)])) piv = r;
    for (int k = 0; k < 2 * d; ++k) std::swap(m[static_cast<std::size_t>(c * 2 * d + k)], m[static_cast<std::size_t>(piv * 2 * d + k)]);
    const C inv = C(1) / m[static_cast<std::size_t>(c * 2 * d + c)];
    for (int k = 0; k < 2 * d; ++k) m[static_cast<std::size_t>(c * 2 * d + k)] *= inv;
    for (int r = 0; r < d; ++r) {
      if (r == c) continue;
      const C f = m[static_cast<std::size_t>(r * 2 * d + c)];
      for (int k = 0; k < 2 * d; ++k) m[static_cast<std::size_t>(r * 2 * d + k)] -= f * m[static_cast<std::size_t>(c * 2 * d + k)];
    }
  }
  std::vector<C> out(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out[static_cast<std::size_t>(i * d + j)] = m[static_cast<std::size_t>(i * 2 * d + d + j)];
  return out;
}

/// Transform by direct summation in long double, with phases reduced exactly
/// through fmodl before the exponential.
inline std::complex<long double> dft_oracle(const stdgm::MultiPattern& p, int component, int fp, int fq, int fu,
                                            bool marked = false) {
  const long double two_pi = 6.283185307179586476925286766559L;
  long double mean = 0;
  int n = 0;
  for (const auto& e : p.events)
    if (e.type == component) {
      mean += e.mark;
      ++n;
    }
  mean /= n;
  std::complex<long double> s = 0;
  for (const auto& e : p.events) {
    if (e.type != component) continue;
    long double phase = fp * static_cast<long double>(e.x) + fq * static_cast<long double>(e.y) +
                        static_cast<long double>(fu) * e.step / p.steps();
    phase = fmodl(phase, 1.0L);
    const long double w = marked ? e.mark - mean : 1.0L;
    s += w * std::polar(1.0L, -two_pi * phase);
  }
  return s;
}

}  // namespace testing
