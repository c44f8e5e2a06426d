#include "stdgm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stdgm/error.hpp"
#include "stdgm/linalg.hpp"

namespace stdgm {

FrequencyGrid FrequencyGrid::defaults(int steps) {
  FrequencyGrid g;
  g.steps = steps;
  g.u_min = -((steps - 1) / 2);
  g.u_max = steps / 2;
  return g;
}

void FrequencyGrid::validate() const {
  if (steps < 1) throw Error(ErrorKind::parameter, "frequency grid needs T >= 1");
  if (p_max < 0) throw Error(ErrorKind::parameter, "p_max must be >= 0");
  if (q_min > q_max) throw Error(ErrorKind::parameter, "q_min must not exceed q_max");
  if (u_min > u_max) throw Error(ErrorKind::parameter, "u_min must not exceed u_max");
  if (u_min < -((steps - 1) / 2) || u_max > steps / 2)
    throw Error(ErrorKind::parameter, "u range must lie within -floor((T-1)/2)..floor(T/2) for T=" +
                                          std::to_string(steps));
}

std::string FrequencyGrid::describe() const {
  std::ostringstream os;
  os << "p=0.." << p_max << ";q=" << q_min << ".." << q_max << ";u=" << u_min << ".." << u_max << ";T=" << steps
     << ";dc=" << (include_dc ? "included" : "excluded");
  return os.str();
}

SmoothingWidths SmoothingWidths::defaults(int steps) { return steps <= 4 ? SmoothingWidths{1, 1, 0} : SmoothingWidths{1, 1, 1}; }

std::string SmoothingWidths::describe() const {
  std::ostringstream os;
  os << "h=(" << p << "," << q << "," << u << ")";
  return os.str();
}

std::vector<PointSample> prepare_samples(const MultiPattern& pattern, bool marked) {
  const int d = pattern.components();
  if (marked && !pattern.has_marks) throw Error(ErrorKind::contract, "marked transform requested but the pattern has no marks");

  std::vector<double> centre(static_cast<std::size_t>(d), 0.0);
  if (marked) {
    std::vector<double> sum(centre.size(), 0.0), lo(centre.size(), std::numeric_limits<double>::infinity()),
        hi(centre.size(), -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> n(centre.size(), 0);
    for (const auto& e : pattern.events) {
      const auto c = static_cast<std::size_t>(e.type);
      sum[c] += e.mark;
      lo[c] = std::min(lo[c], e.mark);
      hi[c] = std::max(hi[c], e.mark);
      ++n[c];
    }
    for (std::size_t c = 0; c < centre.size(); ++c) {
      if (n[c] == 0) continue;
      // Constant marks centre to exactly zero.
      centre[c] = lo[c] == hi[c] ? lo[c] : sum[c] / static_cast<double>(n[c]);
    }
  }

  std::vector<PointSample> samples;
  samples.reserve(pattern.events.size());
  for (const auto& e : pattern.events) {
    if (!(e.x >= 0.0 && e.x <= 1.0 && e.y >= 0.0 && e.y <= 1.0))
      throw Error(ErrorKind::domain, "event coordinates must lie in the unit square; rescale first");
    if (e.step < 1 || e.step > pattern.steps()) throw Error(ErrorKind::domain, "event time step outside 1..T");
    const double w = marked ? e.mark - centre[static_cast<std::size_t>(e.type)] : 1.0;
    samples.push_back({e.x, e.y, e.step, w, e.type});
  }
  return samples;
}

namespace {

DftField make_field(const MultiPattern& pattern, const FrequencyGrid& grid, bool marked) {
  grid.validate();
  if (grid.steps != pattern.steps())
    throw Error(ErrorKind::parameter, "frequency grid T does not match the pattern's number of time steps");
  DftField f;
  f.grid = grid;
  f.components = pattern.components();
  f.values.assign(static_cast<std::size_t>(f.components) * grid.size(), cplx{});
  const auto counts = pattern.counts();
  f.counts.assign(counts.begin(), counts.end());
  f.marked = marked;
  return f;
}

}  // namespace

DftField dft(const MultiPattern& pattern, const FrequencyGrid& grid) {
  DftField f = make_field(pattern, grid, false);
  const auto samples = prepare_samples(pattern, false);
  kernels::dft_direct(samples, f.components, grid, f.values);
  return f;
}

DftField dft_separable(const MultiPattern& pattern, const FrequencyGrid& grid) {
  DftField f = make_field(pattern, grid, false);
  const auto samples = prepare_samples(pattern, false);
  kernels::dft_separable(samples, f.components, grid, f.values);
  return f;
}

DftField marked_dft(const MultiPattern& pattern, const FrequencyGrid& grid, bool separable) {
  DftField f = make_field(pattern, grid, true);
  const auto samples = prepare_samples(pattern, true);
  if (separable)
    kernels::dft_separable(samples, f.components, grid, f.values);
  else
    kernels::dft_direct(samples, f.components, grid, f.values);
  return f;
}

SpectralField SpectralField::from_matrices(const FrequencyGrid& grid, int dim, std::vector<cplx> values) {
  grid.validate();
  if (dim < 1) throw Error(ErrorKind::parameter, "spectral matrices need dimension >= 1");
  if (values.size() != grid.size() * static_cast<std::size_t>(dim) * dim)
    throw Error(ErrorKind::parameter, "matrix data does not match grid size times d^2");
  SpectralField f;
  f.grid = grid;
  f.dim = dim;
  f.values = std::move(values);
  f.stage = Stage::external;
  f.normalisation = Normalisation::unit;
  f.scale.assign(static_cast<std::size_t>(dim), 1.0);
  return f;
}

std::vector<cplx> SpectralField::entry(int i, int j) const {
  std::vector<cplx> out(grid.size());
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = (*this)(g, i, j);
  return out;
}

bool SpectralField::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](const cplx& v) { return v == cplx{}; });
}

SpectralField periodogram_matrix(const DftField& dft, Normalisation normalisation) {
  const int d = dft.components;
  const std::size_t G = dft.grid.size();
  SpectralField f;
  f.grid = dft.grid;
  f.dim = d;
  f.stage = SpectralField::Stage::raw;
  f.marked = dft.marked;
  f.normalisation = normalisation;
  f.scale.assign(static_cast<std::size_t>(d), 1.0);
  if (normalisation == Normalisation::sqrt_counts)
    for (int i = 0; i < d; ++i) {
      const double n = dft.counts[static_cast<std::size_t>(i)];
      if (n > 0.0) f.scale[static_cast<std::size_t>(i)] = std::sqrt(n);
    }
  f.values.assign(G * f.matrix_size(), cplx{});

  const auto dd = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t gi = 0; gi < static_cast<std::ptrdiff_t>(G); ++gi) {
    const auto g = static_cast<std::size_t>(gi);
    cplx* m = f.values.data() + g * f.matrix_size();
    for (std::ptrdiff_t i = 0; i < dd; ++i) {
      const cplx a = dft.at(static_cast<int>(i), g) / f.scale[static_cast<std::size_t>(i)];
      m[i * dd + i] = {std::norm(a), 0.0};
      for (std::ptrdiff_t j = i + 1; j < dd; ++j) {
        const cplx b = dft.at(static_cast<int>(j), g) / f.scale[static_cast<std::size_t>(j)];
        const cplx v = a * std::conj(b);
        m[i * dd + j] = v;
        m[j * dd + i] = std::conj(v);
      }
    }
  }
  return f;
}

SpectralField smooth_spectra(const SpectralField& raw, const SmoothingWidths& widths) {
  if (widths.p < 0 || widths.q < 0 || widths.u < 0) throw Error(ErrorKind::parameter, "smoothing half-widths must be >= 0");
  SpectralField out = raw;
  std::vector<int> counts(raw.grid.size(), 0);
  kernels::smooth(raw.grid, raw.dim, raw.values, widths.p, widths.q, widths.u, out.values, counts);
  out.stage = SpectralField::Stage::smoothed;
  out.widths = widths;
  int smallest = std::numeric_limits<int>::max();
  for (std::size_t g = 0; g < counts.size(); ++g)
    if (raw.grid.counts_in_statistics(g)) smallest = std::min(smallest, counts[g]);
  out.min_neighbourhood = smallest == std::numeric_limits<int>::max() ? 1 : smallest;
  return out;
}

namespace {

void check_component(const SpectralField& f, int i) {
  if (i < 0 || i >= f.dim) throw Error(ErrorKind::parameter, "component index " + std::to_string(i) + " out of range");
}

}  // namespace

std::vector<double> coherence(const SpectralField& field, int i, int j) {
  check_component(field, i);
  check_component(field, j);
  std::vector<double> out(field.grid.size(), 0.0);
  for (std::size_t g = 0; g < out.size(); ++g) {
    const double fii = field(g, i, i).real(), fjj = field(g, j, j).real();
    if (fii > 0.0 && fjj > 0.0) out[g] = std::norm(field(g, i, j)) / (fii * fjj);
  }
  return out;
}

std::vector<double> multiple_coherence(const SpectralField& field, int i, const std::vector<int>& subset) {
  check_component(field, i);
  if (subset.empty()) throw Error(ErrorKind::parameter, "multiple coherence needs a non-empty subset");
  for (int j : subset) {
    check_component(field, j);
    if (j == i) throw Error(ErrorKind::parameter, "subset must not contain the target component");
  }
  const RidgePolicy policy;
  const int target[1] = {i};
  std::vector<double> out(field.grid.size(), 0.0);
  for (std::size_t g = 0; g < out.size(); ++g) {
    const double fii = field(g, i, i).real();
    if (!(fii > 0.0)) continue;
    const auto m = field.matrix(g);
    const CMatrix fjj = submatrix(m, field.dim, subset, subset);
    if (condition_number(fjj) > policy.max_condition)
      throw GridPointError(ErrorKind::conditioning, g, "f_JJ is singular in multiple coherence");
    const auto x = lu_solve(fjj, submatrix(m, field.dim, subset, target));
    if (!x) throw GridPointError(ErrorKind::conditioning, g, "f_JJ is singular in multiple coherence");
    const CMatrix fiJ = submatrix(m, field.dim, target, subset);
    out[g] = (fiJ * *x)(0, 0).real() / fii;
  }
  return out;
}

DotSpectrum dot_spectrum(const SpectralField& field, int i) {
  check_component(field, i);
  const std::size_t G = field.grid.size();
  DotSpectrum out{std::vector<cplx>(G), std::vector<double>(G, 0.0), std::vector<double>(G, 0.0)};
  for (std::size_t g = 0; g < G; ++g) {
    cplx cross{};
    double dot = 0.0;
    for (int j = 0; j < field.dim; ++j) {
      if (j == i) continue;
      cross += field(g, i, j);
      for (int k = 0; k < field.dim; ++k)
        if (k != i) dot += field(g, j, k).real();
    }
    out.cross[g] = cross;
    out.dot_auto[g] = dot;
    const double fii = field(g, i, i).real();
    if (fii > 0.0 && dot > 0.0) out.coherence[g] = std::norm(cross) / (fii * dot);
  }
  return out;
}

std::vector<double> gain_spectrum(const SpectralField& field, int i, int j) {
  const auto coh = coherence(field, i, j);
  std::vector<double> out(coh.size(), 0.0);
  for (std::size_t g = 0; g < out.size(); ++g) {
    const double fii = field(g, i, i).real(), fjj = field(g, j, j).real();
    if (fjj > 0.0 && fii > 0.0) out[g] = std::sqrt(fii * coh[g]) / fjj;
  }
  return out;
}

std::vector<double> dot_gain_spectrum(const SpectralField& field, int i) {
  const auto dot = dot_spectrum(field, i);
  std::vector<double> out(dot.cross.size(), 0.0);
  for (std::size_t g = 0; g < out.size(); ++g) {
    const double fii = field(g, i, i).real();
    if (dot.dot_auto[g] > 0.0 && fii > 0.0) out[g] = std::sqrt(fii * dot.coherence[g]) / dot.dot_auto[g];
  }
  return out;
}

CrossDecomposition decompose_cross_spectrum(const SpectralField& field, int i, int j) {
  check_component(field, i);
  check_component(field, j);
  const std::size_t G = field.grid.size();
  CrossDecomposition out;
  out.co.resize(G);
  out.quadrature.resize(G);
  out.amplitude.resize(G);
  out.phase.resize(G);
  for (std::size_t g = 0; g < G; ++g) {
    const cplx v = field(g, i, j);
    out.co[g] = v.real();
    out.quadrature[g] = -v.imag();
    out.amplitude[g] = std::abs(v);
    out.phase[g] = std::atan2(-out.quadrature[g], out.co[g]);
  }
  return out;
}

}  // namespace stdgm
