#include "stdgm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <boost/math/quadrature/gauss.hpp>

#include "stdgm/error.hpp"

namespace stdgm {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool selected(const std::vector<int>& types, int type) {
  return types.empty() || std::find(types.begin(), types.end(), type) != types.end();
}

void require_unit_square(const MultiPattern& pattern) {
  for (const auto& e : pattern.events)
    if (!(e.x >= 0.0 && e.x <= 1.0 && e.y >= 0.0 && e.y <= 1.0))
      throw Error(ErrorKind::domain, "classical estimators expect unit-square coordinates; rescale first");
}

double gaussian(double z, double h) { return std::exp(-0.5 * z * z / (h * h)) / (std::sqrt(2.0 * kPi) * h); }

// Spatial kernel contribution of one event: separable weights along x and y,
// already divided by the Diggle correction.
struct SpatialWeights {
  std::vector<double> gx, gy;
};

SpatialWeights spatial_weights(double x, double y, double h, int cells) {
  const double cs = 1.0 / cells;
  SpatialWeights w{std::vector<double>(static_cast<std::size_t>(cells)), std::vector<double>(static_cast<std::size_t>(cells))};
  double sx = 0.0, sy = 0.0;
  for (int k = 0; k < cells; ++k) {
    const double c = (k + 0.5) * cs;
    w.gx[static_cast<std::size_t>(k)] = gaussian(c - x, h);
    w.gy[static_cast<std::size_t>(k)] = gaussian(c - y, h);
    sx += w.gx[static_cast<std::size_t>(k)] * cs;
    sy += w.gy[static_cast<std::size_t>(k)] * cs;
  }
  for (auto& v : w.gx) v /= sx;
  for (auto& v : w.gy) v /= sy;
  return w;
}

void add_spatial(std::vector<double>& surface, const SpatialWeights& w, int cells, double scale) {
  for (int iy = 0; iy < cells; ++iy)
    for (int ix = 0; ix < cells; ++ix)
      surface[static_cast<std::size_t>(iy) * cells + ix] +=
          scale * w.gx[static_cast<std::size_t>(ix)] * w.gy[static_cast<std::size_t>(iy)];
}

// Row tau - 1 holds phi(t - tau) / c(tau) for t = 1..T.
std::vector<double> temporal_weights(int steps, double h) {
  std::vector<double> w(static_cast<std::size_t>(steps) * steps);
  for (int tau = 1; tau <= steps; ++tau) {
    double c = 0.0;
    for (int t = 1; t <= steps; ++t) c += gaussian(t - tau, h);
    for (int t = 1; t <= steps; ++t)
      w[static_cast<std::size_t>(tau - 1) * steps + (t - 1)] = gaussian(t - tau, h) / c;
  }
  return w;
}

void check_intensity_args(double bandwidth, int cells) {
  if (!(bandwidth > 0.0)) throw Error(ErrorKind::parameter, "bandwidth must be > 0");
  if (cells < 1) throw Error(ErrorKind::parameter, "cell count must be >= 1");
}

double triangular_cdf(double x) {
  if (x <= -1.0) return 0.0;
  if (x <= 0.0) return 0.5 * (1.0 + x) * (1.0 + x);
  if (x < 1.0) return 1.0 - 0.5 * (1.0 - x) * (1.0 - x);
  return 1.0;
}

double epanechnikov(double z, double h) {
  const double u = z / h;
  return std::abs(u) < 1.0 ? 0.75 * (1.0 - u * u) / h : 0.0;
}

}  // namespace

double IntensitySurface::lookup(double x, double y) const {
  const int ix = std::clamp(static_cast<int>(x * cells), 0, cells - 1);
  const int iy = std::clamp(static_cast<int>(y * cells), 0, cells - 1);
  return at(ix, iy);
}

double IntensitySurface::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_size * cell_size;
}

double SpaceTimeIntensity::lookup(double x, double y, int t) const {
  const int ix = std::clamp(static_cast<int>(x * cells), 0, cells - 1);
  const int iy = std::clamp(static_cast<int>(y * cells), 0, cells - 1);
  return at(ix, iy, t);
}

double SpaceTimeIntensity::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / (static_cast<double>(cells) * cells);
}

IntensitySurface estimate_spatial_intensity(const MultiPattern& pattern, double bandwidth, int cells,
                                            const std::vector<int>& types) {
  check_intensity_args(bandwidth, cells);
  require_unit_square(pattern);
  IntensitySurface s{cells, 1.0 / cells, bandwidth, std::vector<double>(static_cast<std::size_t>(cells) * cells, 0.0)};
  for (const auto& e : pattern.events)
    if (selected(types, e.type)) add_spatial(s.values, spatial_weights(e.x, e.y, bandwidth, cells), cells, 1.0);
  return s;
}

std::vector<double> estimate_temporal_intensity(const MultiPattern& pattern, double bandwidth,
                                                const std::vector<int>& types) {
  check_intensity_args(bandwidth, 1);
  const int T = pattern.steps();
  const auto w = temporal_weights(T, bandwidth);
  std::vector<double> out(static_cast<std::size_t>(T), 0.0);
  for (const auto& e : pattern.events)
    if (selected(types, e.type))
      for (int t = 0; t < T; ++t) out[static_cast<std::size_t>(t)] += w[static_cast<std::size_t>(e.step - 1) * T + t];
  return out;
}

SpaceTimeIntensity estimate_separable_intensity(const MultiPattern& pattern, double spatial_bandwidth,
                                                double temporal_bandwidth, int cells) {
  const auto space = estimate_spatial_intensity(pattern, spatial_bandwidth, cells);
  const auto time = estimate_temporal_intensity(pattern, temporal_bandwidth);
  const double n = static_cast<double>(pattern.size());
  if (n == 0.0) throw Error(ErrorKind::empty_input, "intensity of an empty pattern");
  SpaceTimeIntensity out{cells, pattern.steps(), {}};
  out.values.reserve(space.values.size() * time.size());
  for (double lt : time)
    for (double ls : space.values) out.values.push_back(ls * lt / n);
  return out;
}

SpaceTimeIntensity estimate_nonseparable_intensity(const MultiPattern& pattern, double spatial_bandwidth,
                                                   double temporal_bandwidth, int cells) {
  check_intensity_args(spatial_bandwidth, cells);
  check_intensity_args(temporal_bandwidth, 1);
  require_unit_square(pattern);
  const int T = pattern.steps();
  const std::size_t plane = static_cast<std::size_t>(cells) * cells;
  // Per-step spatial sums S_tau(s); the temporal kernel only depends on tau.
  std::vector<double> by_step(plane * static_cast<std::size_t>(T), 0.0);
  std::vector<std::vector<double>> step_planes(static_cast<std::size_t>(T), std::vector<double>(plane, 0.0));
  for (const auto& e : pattern.events)
    add_spatial(step_planes[static_cast<std::size_t>(e.step - 1)], spatial_weights(e.x, e.y, spatial_bandwidth, cells),
                cells, 1.0);
  for (int tau = 0; tau < T; ++tau)
    std::copy(step_planes[static_cast<std::size_t>(tau)].begin(), step_planes[static_cast<std::size_t>(tau)].end(),
              by_step.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(tau) * plane));
  const auto w = temporal_weights(T, temporal_bandwidth);
  SpaceTimeIntensity out{cells, T, std::vector<double>(plane * static_cast<std::size_t>(T), 0.0)};
  for (int t = 1; t <= T; ++t)
    for (int tau = 1; tau <= T; ++tau) {
      const double wt = w[static_cast<std::size_t>(tau - 1) * T + (t - 1)];
      const double* src = by_step.data() + static_cast<std::size_t>(tau - 1) * plane;
      double* dst = out.values.data() + static_cast<std::size_t>(t - 1) * plane;
      for (std::size_t k = 0; k < plane; ++k) dst[k] += wt * src[k];
    }
  return out;
}

double scott_spatial_bandwidth(const MultiPattern& pattern) {
  const double n = static_cast<double>(pattern.size());
  if (n < 2) throw Error(ErrorKind::parameter, "Scott's rule needs at least two events");
  double mx = 0, my = 0;
  for (const auto& e : pattern.events) {
    mx += e.x;
    my += e.y;
  }
  mx /= n;
  my /= n;
  double vx = 0, vy = 0;
  for (const auto& e : pattern.events) {
    vx += (e.x - mx) * (e.x - mx);
    vy += (e.y - my) * (e.y - my);
  }
  const double sigma = std::sqrt(0.5 * (vx + vy) / (n - 1.0));
  if (!(sigma > 0.0)) throw Error(ErrorKind::parameter, "Scott's rule needs spatially distinct events");
  return sigma * std::pow(n, -1.0 / 6.0);
}

double scott_temporal_bandwidth(const MultiPattern& pattern) {
  const double n = static_cast<double>(pattern.size());
  if (n < 2) throw Error(ErrorKind::parameter, "Scott's rule needs at least two events");
  double m = 0;
  for (const auto& e : pattern.events) m += e.step;
  m /= n;
  double v = 0;
  for (const auto& e : pattern.events) v += (e.step - m) * (e.step - m);
  double sigma = std::sqrt(v / (n - 1.0));
  // All events in one step: fall back to one step, the temporal resolution.
  if (!(sigma > 0.0)) sigma = 1.0;
  return sigma * std::pow(n, -1.0 / 5.0);
}

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::pair_correlation: return "pair_correlation";
    case CurveKind::marked_K: return "marked_K";
    case CurveKind::mark_weighted_K: return "mark_weighted_K";
  }
  return "unknown";
}

double temporal_indicator(int k, double t) {
  if (!(t > 0.0)) return 0.0;
  return triangular_cdf(t - k) - triangular_cdf(-t - k);
}

double temporal_kernel(int k, double t, double delta) {
  // Integrand is piecewise polynomial in x; split at every kink and integrate
  // each piece exactly with 8-point Gauss-Legendre.
  std::vector<double> cuts{-1.0, 0.0, 1.0, -static_cast<double>(k)};
  for (double a : {t - delta, t + delta})
    for (double s : {-1.0, 1.0}) cuts.push_back(s * a - k);
  std::sort(cuts.begin(), cuts.end());
  auto f = [&](double x) { return epanechnikov(std::abs(k + x) - t, delta) * (1.0 - std::abs(x)); };
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = std::max(cuts[c], -1.0), b = std::min(cuts[c + 1], 1.0);
    if (b > a) total += boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
  }
  return total;
}

namespace {

struct Point {
  double x, y;
  int step, type;
  double lambda, mark;
};

// Uniform bucket grid over the unit square for fixed-radius neighbour queries.
class Buckets {
 public:
  Buckets(const std::vector<Point>& pts, double reach) : m_(std::max(1, static_cast<int>(1.0 / std::max(reach, 1e-9)))) {
    m_ = std::min(m_, 512);
    cells_.resize(static_cast<std::size_t>(m_) * m_);
    for (std::size_t k = 0; k < pts.size(); ++k) cells_[cell(pts[k].x, pts[k].y)].push_back(k);
  }
  template <typename Fn>
  void visit(double x, double y, Fn&& fn) const {
    const int cx = coord(x), cy = coord(y);
    for (int by = std::max(0, cy - 1); by <= std::min(m_ - 1, cy + 1); ++by)
      for (int bx = std::max(0, cx - 1); bx <= std::min(m_ - 1, cx + 1); ++bx)
        for (std::size_t k : cells_[static_cast<std::size_t>(by) * m_ + bx]) fn(k);
  }

 private:
  int coord(double v) const { return std::clamp(static_cast<int>(v * m_), 0, m_ - 1); }
  std::size_t cell(double x, double y) const { return static_cast<std::size_t>(coord(y)) * m_ + coord(x); }
  int m_;
  std::vector<std::vector<std::size_t>> cells_;
};

std::vector<Point> plug_in_points(const MultiPattern& pattern, const IntensityPlugin& plugin) {
  require_unit_square(pattern);
  const auto counts = pattern.counts();
  const double n = static_cast<double>(pattern.size());
  const double T = pattern.steps();
  const double d = pattern.components();
  SpaceTimeIntensity kernel;
  if (plugin.kind == IntensityPlugin::Kind::separable_kernel) {
    const double hs = plugin.spatial_bandwidth > 0 ? plugin.spatial_bandwidth : scott_spatial_bandwidth(pattern);
    const double ht = plugin.temporal_bandwidth > 0 ? plugin.temporal_bandwidth : scott_temporal_bandwidth(pattern);
    kernel = estimate_separable_intensity(pattern, hs, ht, plugin.cells);
  }
  std::vector<Point> pts;
  pts.reserve(pattern.size());
  for (const auto& e : pattern.events) {
    const double nm = static_cast<double>(counts[static_cast<std::size_t>(e.type)]);
    double lambda = 0.0;
    switch (plugin.kind) {
      case IntensityPlugin::Kind::homogeneous: lambda = nm / T; break;
      case IntensityPlugin::Kind::homogeneous_ground: lambda = n / (d * T); break;
      case IntensityPlugin::Kind::separable_kernel: lambda = kernel.lookup(e.x, e.y, e.step) * nm / n; break;
    }
    pts.push_back({e.x, e.y, e.step, e.type, lambda, e.mark});
  }
  return pts;
}

double border_distance(const Point& p) { return std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y}); }

// Shared double sum: for each reference i (type in C) and partner j != i (type
// in D) within `reach`, `term(i, j, dist, k, ir, it)` returns the contribution at
// grid point (ir, it) or 0. Per-reference partial sums are reduced in reference
// order, so the result does not depend on the thread count.
template <typename Term, typename Eligible>
std::vector<double> pair_sum(const std::vector<Point>& pts, const std::vector<int>& C, const std::vector<int>& D,
                             double reach, int step_reach, std::size_t nr, std::size_t nt, Eligible eligible,
                             Term term) {
  const Buckets buckets(pts, reach);
  std::vector<std::size_t> refs;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (selected(C, pts[i].type)) refs.push_back(i);
  const std::size_t G = nr * nt;
  std::vector<double> partial(refs.size() * G, 0.0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t ri = 0; ri < static_cast<std::ptrdiff_t>(refs.size()); ++ri) {
    const std::size_t i = refs[static_cast<std::size_t>(ri)];
    const Point& a = pts[i];
    double* acc = partial.data() + static_cast<std::size_t>(ri) * G;
    std::vector<char> ok(G);
    for (std::size_t ir = 0; ir < nr; ++ir)
      for (std::size_t it = 0; it < nt; ++it) ok[ir * nt + it] = eligible(a, ir, it);
    if (std::none_of(ok.begin(), ok.end(), [](char c) { return c != 0; })) continue;
    std::vector<std::size_t> partners;
    buckets.visit(a.x, a.y, [&](std::size_t j) { partners.push_back(j); });
    std::sort(partners.begin(), partners.end());
    for (std::size_t j : partners) {
      if (j == i) continue;
      const Point& b = pts[j];
      if (!selected(D, b.type)) continue;
      const int k = b.step - a.step;
      if (std::abs(k) > step_reach) continue;
      const double dx = a.x - b.x, dy = a.y - b.y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist > reach) continue;
      for (std::size_t g = 0; g < G; ++g)
        if (ok[g]) acc[g] += term(a, b, dist, k, g / nt, g % nt);
    }
  }
  std::vector<double> total(G, 0.0);
  for (std::size_t ri = 0; ri < refs.size(); ++ri)
    for (std::size_t g = 0; g < G; ++g) total[g] += partial[ri * G + g];
  return total;
}

void check_grid(const std::vector<double>& grid, const char* name) {
  if (grid.empty()) throw Error(ErrorKind::parameter, std::string(name) + " grid is empty");
  for (double v : grid)
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::parameter, std::string(name) + " grid values must be >= 0");
}

int step_reach_of(double t) { return static_cast<int>(std::ceil(t)); }

struct BorderMeasure {
  double area;
  double time;
};

// Empty when the border region vanishes; such (r, t) cells are reported as NaN.
std::optional<BorderMeasure> border_measure(EdgeCorrection edge, double spatial_reach, int step_reach, int steps) {
  if (edge == EdgeCorrection::none) return BorderMeasure{1.0, static_cast<double>(steps)};
  const double side = 1.0 - 2.0 * spatial_reach;
  const int time = steps - 2 * step_reach;
  if (!(side > 0.0) || time <= 0) return std::nullopt;
  return BorderMeasure{side * side, static_cast<double>(time)};
}

bool border_eligible(EdgeCorrection edge, const Point& p, double spatial_reach, int step_reach, int steps) {
  if (edge == EdgeCorrection::none) return true;
  return border_distance(p) >= spatial_reach && p.step >= 1 + step_reach && p.step <= steps - step_reach;
}

CurveEstimate k_family(const MultiPattern& pattern, const std::vector<int>& C, const std::vector<int>& D,
                       const std::vector<double>& r_grid, const std::vector<double>& t_grid,
                       const SecondOrderOptions& options, CurveKind kind, double mark_mean) {
  check_grid(r_grid, "r");
  check_grid(t_grid, "t");
  for (int c : C)
    if (c < 0 || c >= pattern.components()) throw Error(ErrorKind::parameter, "type set references an unknown type");
  for (int c : D)
    if (c < 0 || c >= pattern.components()) throw Error(ErrorKind::parameter, "type set references an unknown type");
  const auto pts = plug_in_points(pattern, options.intensity);
  const int T = pattern.steps();
  const double rmax = *std::max_element(r_grid.begin(), r_grid.end());
  const double tmax = *std::max_element(t_grid.begin(), t_grid.end());
  const std::size_t nr = r_grid.size(), nt = t_grid.size();
  const bool weighted = kind == CurveKind::mark_weighted_K;
  const double mm = mark_mean * mark_mean;

  auto eligible = [&](const Point& p, std::size_t ir, std::size_t it) {
    return border_eligible(options.edge, p, r_grid[ir], step_reach_of(t_grid[it]), T);
  };
  auto term = [&](const Point& a, const Point& b, double dist, int k, std::size_t ir, std::size_t it) {
    if (dist > r_grid[ir]) return 0.0;
    const double ind = temporal_indicator(k, t_grid[it]);
    if (ind == 0.0) return 0.0;
    const double w = weighted ? (a.mark * b.mark) / mm - 1.0 : 1.0;
    return w * ind / (a.lambda * b.lambda);
  };
  const auto sums = pair_sum(pts, C, D, rmax, step_reach_of(tmax), nr, nt, eligible, term);

  const double nu = static_cast<double>(C.empty() ? pattern.components() : static_cast<int>(C.size())) *
                    static_cast<double>(D.empty() ? pattern.components() : static_cast<int>(D.size()));
  CurveEstimate out{kind, r_grid, t_grid, std::vector<double>(nr * nt, 0.0), C, D};
  for (std::size_t ir = 0; ir < nr; ++ir)
    for (std::size_t it = 0; it < nt; ++it) {
      const auto m = border_measure(options.edge, r_grid[ir], step_reach_of(t_grid[it]), T);
      out.values[ir * nt + it] = m ? sums[ir * nt + it] / (m->area * m->time * nu) : kNaN;
    }
  return out;
}

}  // namespace

CurveEstimate estimate_marked_K(const MultiPattern& pattern, const std::vector<int>& C, const std::vector<int>& D,
                                const std::vector<double>& r_grid, const std::vector<double>& t_grid,
                                const SecondOrderOptions& options) {
  return k_family(pattern, C, D, r_grid, t_grid, options, CurveKind::marked_K, 1.0);
}

CurveEstimate estimate_mark_weighted_K(const MultiPattern& pattern, int component, const std::vector<double>& r_grid,
                                       const std::vector<double>& t_grid, const SecondOrderOptions& options) {
  if (!pattern.has_marks) throw Error(ErrorKind::contract, "mark-weighted K needs quantitative marks");
  if (component < 0 || component >= pattern.components()) throw Error(ErrorKind::parameter, "unknown component");
  double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t n = 0;
  for (const auto& e : pattern.events)
    if (e.type == component) {
      sum += e.mark;
      lo = std::min(lo, e.mark);
      hi = std::max(hi, e.mark);
      ++n;
    }
  if (n == 0) throw Error(ErrorKind::empty_input, "component has no events");
  const double mean = lo == hi ? lo : sum / static_cast<double>(n);
  if (mean == 0.0) throw Error(ErrorKind::domain, "mark-weighted K needs a non-zero mean mark");
  return k_family(pattern, {component}, {component}, r_grid, t_grid, options, CurveKind::mark_weighted_K, mean);
}

CurveEstimate estimate_pair_correlation(const MultiPattern& pattern, const std::vector<int>& types,
                                        const std::vector<double>& r_grid, const std::vector<double>& t_grid,
                                        double epsilon, double delta, const SecondOrderOptions& options) {
  check_grid(r_grid, "r");
  check_grid(t_grid, "t");
  if (!(epsilon > 0.0) || !(delta > 0.0)) throw Error(ErrorKind::parameter, "kernel half-widths must be > 0");
  for (double r : r_grid)
    if (!(r > epsilon)) throw Error(ErrorKind::domain, "pair correlation needs r > epsilon");
  for (double t : t_grid)
    if (!(t > delta)) throw Error(ErrorKind::domain, "pair correlation needs t > delta");
  SecondOrderOptions opts = options;
  // A single type set is one process: the plug-in is its own homogeneous intensity.
  MultiPattern pooled = pattern;
  if (!types.empty()) {
    pooled.events.clear();
    for (const auto& e : pattern.events)
      if (selected(types, e.type)) pooled.events.push_back(e);
  }
  for (auto& e : pooled.events) e.type = 0;
  pooled.labels = {"pooled"};
  const auto pts = plug_in_points(pooled, opts.intensity);
  const int T = pattern.steps();
  const double rmax = *std::max_element(r_grid.begin(), r_grid.end());
  const double tmax = *std::max_element(t_grid.begin(), t_grid.end());
  const std::size_t nr = r_grid.size(), nt = t_grid.size();
  auto eligible = [&](const Point& p, std::size_t ir, std::size_t it) {
    return border_eligible(opts.edge, p, r_grid[ir] + epsilon, step_reach_of(t_grid[it] + delta), T);
  };
  auto term = [&](const Point& a, const Point& b, double dist, int k, std::size_t ir, std::size_t it) {
    const double ks = epanechnikov(dist - r_grid[ir], epsilon);
    if (ks == 0.0) return 0.0;
    return ks * temporal_kernel(k, t_grid[it], delta) / (a.lambda * b.lambda);
  };
  const auto sums = pair_sum(pts, {}, {}, rmax + epsilon, step_reach_of(tmax + delta), nr, nt, eligible, term);
  CurveEstimate out{CurveKind::pair_correlation, r_grid, t_grid, std::vector<double>(nr * nt, 0.0), types, types};
  for (std::size_t ir = 0; ir < nr; ++ir)
    for (std::size_t it = 0; it < nt; ++it) {
      const auto m = border_measure(opts.edge, r_grid[ir] + epsilon, step_reach_of(t_grid[it] + delta), T);
      out.values[ir * nt + it] = m ? sums[ir * nt + it] / (4.0 * kPi * r_grid[ir] * m->area * m->time) : kNaN;
    }
  return out;
}

}  // namespace stdgm
