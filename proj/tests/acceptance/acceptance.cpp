// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "../support.hpp"
#include "stdgm/analysis.hpp"
#include "stdgm/classical.hpp"
#include "stdgm/csv.hpp"
#include "stdgm/graph.hpp"
#include "stdgm/inverse.hpp"
#include "stdgm/linalg.hpp"
#include "stdgm/partial.hpp"
#include "stdgm/simulate.hpp"

#ifndef STDGM_CLI
#error "STDGM_CLI must name the command-line executable"
#endif

using namespace stdgm;
using testing::cplx;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %-34s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt.count());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Parameters shared by the null and planted-edge studies.
constexpr int kSteps = 4;
constexpr double kRate = 300.0;
constexpr double kOffspring = 200.0;
constexpr double kDispersion = 0.002;
constexpr int kSeeds = 100;

AnalysisOptions study_options() {
  AnalysisOptions o;
  o.widths = SmoothingWidths{3, 3, 0};
  return o;
}

SimSpec poisson_spec(std::uint64_t seed) {
  SimSpec s;
  s.kind = SimSpec::Kind::homogeneous_poisson;
  s.components = 3;
  s.rates = {kRate, kRate, kRate};
  s.steps = kSteps;
  s.seed = seed;
  return s;
}

SimSpec linked_spec(std::uint64_t seed) {
  SimSpec s = poisson_spec(seed);
  s.kind = SimSpec::Kind::linked_cluster;
  s.links = {{0, 1, kOffspring, kDispersion}};
  return s;
}

// Running record of the bound checks over every analysed simulation.
struct Bounds {
  double worst_statistic = 0.0;  // largest value of any coherence-type statistic
  double lowest_statistic = 0.0;
  double worst_eigen = 0.0;  // most negative lambda_min / trace
  double worst_hermitian = 0.0;
  std::size_t runs = 0;

  void statistic(double v) {
    worst_statistic = std::max(worst_statistic, v);
    lowest_statistic = std::min(lowest_statistic, v);
  }

  void record(const Analysis& a) {
    const SpectralField& f = a.smoothed;
    const int d = f.dim;
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j)
        for (double v : coherence(f, i, j)) statistic(v);
      for (double v : dot_spectrum(f, i).coherence) statistic(v);
      std::vector<int> rest;
      for (int j = 0; j < d; ++j)
        if (j != i) rest.push_back(j);
      for (double v : multiple_coherence(f, i, rest)) statistic(v);
    }
    for (const auto& pair : a.partial.pairs)
      for (double v : pair.abs_d) statistic(v);
    for (std::size_t g = 0; g < f.grid.size(); ++g) {
      const CMatrix m = to_matrix(f.matrix(g), d);
      worst_hermitian = std::max(worst_hermitian, hermitian_defect(m));
      const double trace = m.trace().real();
      if (trace > 0.0) worst_eigen = std::min(worst_eigen, hermitian_eigenvalues(m)(0) / trace);
    }
    ++runs;
  }
};

Bounds bounds;
double shared_xi = std::numeric_limits<double>::quiet_NaN();

Outcome dual_route() {
  // 100 grid points, an independent random HPD matrix at each.
  FrequencyGrid grid;
  grid.p_max = 9;
  grid.q_min = 0;
  grid.q_max = 9;
  grid.u_min = grid.u_max = 0;
  grid.steps = 1;
  double worst = 0.0;
  for (int d : {3, 4, 5}) {
    const auto f = testing::random_field(grid, d, 1000 + static_cast<std::uint64_t>(d));
    const auto pf = compute_partial(f);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const auto direct = partial_coherence_direct(f, i, j);
        const auto& via_inverse = pf.pair(i, j).coherency;
        for (std::size_t g = 0; g < grid.size(); ++g) worst = std::max(worst, std::abs(direct[g] - via_inverse[g]));
        if (d == 3) {
          const auto three = partial_coherence_three(f, i, j, 3 - i - j);
          for (std::size_t g = 0; g < grid.size(); ++g) worst = std::max(worst, std::abs(three[g] - direct[g]));
        }
      }
  }
  return {worst <= 1e-8, "max |diff| = " + num(worst)};
}

Outcome dft_correctness() {
  const auto grid = FrequencyGrid::defaults(4);
  double worst_ratio = 0.0;
  for (int r = 0; r < 20; ++r) {
    // n = 1000 events split over three components.
    auto p = testing::uniform_pattern(3, 4, 334, 500 + static_cast<std::uint64_t>(r));
    p.events.resize(1000);
    const double n = static_cast<double>(p.size());
    const auto a = dft(p, grid);
    const auto b = dft_separable(p, grid);
    for (std::size_t k = 0; k < a.values.size(); ++k) worst_ratio = std::max(worst_ratio, std::abs(a.values[k] - b.values[k]) / n);
  }

  // Hand oracle: two events with exactly representable coordinates, so that
  // every transform value is a sum of eighth roots of unity.
  MultiPattern hand;
  hand.labels = {"a", "b"};
  hand.window = {0, 1, 0, 1, 4};
  hand.unit_square = true;
  hand.events = {{0.25, 0.5, 1, 0, 0.0}, {0.125, 0.75, 3, 0, 0.0}, {0.5, 0.5, 2, 1, 0.0}};
  const double h = std::sqrt(0.5);
  struct Probe {
    FrequencyPoint w;
    cplx expect;
  };
  // F(p,q,u) = exp(-2 pi i (p/4 + q/2 + u/4)) + exp(-2 pi i (p/8 + 3q/4 + 3u/4))
  const Probe probes[] = {
      {{0, 0, 0}, {2.0, 0.0}},
      {{1, 0, 0}, {0.0 + h, -1.0 - h}},  // e^{-i pi/2} + e^{-i pi/4}
      {{0, 1, 0}, {-1.0, 1.0}},          // e^{-i pi} + e^{-3i pi/2}
      {{2, -1, 1}, {0.0, -2.0}},         // both phases reduce to a quarter turn
      {{4, 2, 2}, {-2.0, 0.0}},          // both phases reduce to a half turn
  };
  const auto hf = dft(hand, grid);
  double worst_hand = 0.0;
  for (const auto& pr : probes) {
    // Long double cross-check of the closed forms above.
    const auto o = testing::dft_oracle(hand, 0, pr.w.p, pr.w.q, pr.w.u);
    const cplx oracle(static_cast<double>(o.real()), static_cast<double>(o.imag()));
    const cplx got = hf.at(0, grid.index(pr.w.p, pr.w.q, pr.w.u));
    worst_hand = std::max({worst_hand, std::abs(got - pr.expect), std::abs(got - oracle)});
  }
  return {worst_ratio <= 1e-10 && worst_hand <= 1e-12,
          "max |direct - separable| / n = " + num(worst_ratio) + ", hand oracle |err| = " + num(worst_hand)};
}

Outcome round_trip() {
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    const auto p = testing::uniform_pattern(3, 4, 300, 700 + static_cast<std::uint64_t>(r));
    const auto f = smooth_spectra(periodogram_matrix(dft_separable(p, FrequencyGrid::defaults(4))), {1, 1, 0});
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const auto entry = f.entry(i, j);
        const auto sym = symmetrise(f.grid, entry);
        const auto lag = inverse_entry(f.grid, entry, i, j);
        std::vector<cplx> real_lag(lag.values.begin(), lag.values.end());
        const auto back = forward_sum(LagGrid::conjugate_to(f.grid), real_lag);
        double scale = 0.0, err = 0.0;
        for (std::size_t k = 0; k < sym.size(); ++k) {
          scale = std::max(scale, std::abs(sym.values[k]));
          err = std::max(err, std::abs(back.values[k] - sym.values[k]));
        }
        worst = std::max(worst, err / scale);
      }
  }
  return {worst <= 1e-8, "max relative error = " + num(worst)};
}

double calibrate_once() {
  // Matched counts: the expected per-step counts of the null design.
  const auto reference = simulate(poisson_spec(1)).pattern;
  const auto cal = calibrate_null_threshold(reference.counts_by_step(), reference.labels, study_options(), 200, 0.95,
                                            20240601);
  return cal.xi;
}

Outcome null_specificity() {
  shared_xi = calibrate_once();
  int empty = 0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto a = analyse(simulate(poisson_spec(10000 + static_cast<std::uint64_t>(s))).pattern, study_options());
    bounds.record(a);
    if (build_dependence_graph(a.partial, shared_xi, {"1", "2", "3"}).edges.empty()) ++empty;
  }
  return {empty >= 90, "xi = " + num(shared_xi) + ", empty graphs in " + std::to_string(empty) + "/100 seeds"};
}

Outcome planted_edge() {
  if (std::isnan(shared_xi)) shared_xi = calibrate_once();
  int exact = 0;
  double shared_fraction = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto sim = simulate(linked_spec(20000 + static_cast<std::uint64_t>(s)));
    const auto n = sim.pattern.counts();
    shared_fraction += kOffspring * kSteps / static_cast<double>(n[0]) / kSeeds;
    const auto a = analyse(sim.pattern, study_options());
    bounds.record(a);
    const auto g = build_dependence_graph(a.partial, shared_xi, {"1", "2", "3"});
    if (g.has_edge(0, 1) && !g.has_edge(0, 2) && !g.has_edge(1, 2)) ++exact;
  }
  return {exact >= 80 && shared_fraction >= 0.3, "shared-parent share ~ " + num(shared_fraction) +
                                                     ", exact planted graph in " + std::to_string(exact) + "/100 seeds"};
}

Outcome poisson_k() {
  const std::vector<double> rs{0.05, 0.1}, ts{1.0, 2.0};
  std::vector<double> mean(4, 0.0);
  for (int s = 0; s < kSeeds; ++s) {
    SimSpec spec = poisson_spec(30000 + static_cast<std::uint64_t>(s));
    spec.components = 2;
    spec.rates = {150.0, 150.0};
    spec.steps = 10;
    const auto p = simulate(spec).pattern;
    const auto k = estimate_marked_K(p, {0}, {1}, rs, ts);
    for (std::size_t c = 0; c < 4; ++c) mean[c] += k.values[c] / kSeeds;
  }
  std::string detail;
  bool ok = true;
  const std::pair<std::size_t, std::size_t> cells[] = {{0, 0}, {1, 0}, {1, 1}};
  for (const auto& [ir, it] : cells) {
    const double expect = 2.0 * std::numbers::pi * rs[ir] * rs[ir] * ts[it];
    const double rel = mean[ir * 2 + it] / expect - 1.0;
    ok = ok && std::abs(rel) <= 0.10;
    detail += "(" + num(rs[ir]) + "," + num(ts[it]) + "): " + num(100 * rel) + "% ";
  }
  return {ok, detail};
}

Outcome intensity_mass() {
  double worst = 0.0;
  for (int r = 0; r < 20; ++r) {
    auto p = testing::uniform_pattern(2, 4, 500, 900 + static_cast<std::uint64_t>(r));
    const double n = static_cast<double>(p.size());
    const auto s = estimate_spatial_intensity(p, scott_spatial_bandwidth(p));
    worst = std::max(worst, std::abs(s.integral() / n - 1.0));
  }
  return {worst <= 0.02, "max relative mass error = " + num(worst)};
}

Outcome bound_suite() {
  const bool ok = bounds.runs > 0 && bounds.worst_statistic <= 1.0 + 1e-9 && bounds.lowest_statistic >= 0.0 &&
                  bounds.worst_eigen >= -1e-9 && bounds.worst_hermitian == 0.0;
  return {ok, std::to_string(bounds.runs) + " runs; statistics in [" + num(bounds.lowest_statistic) + ", " +
                  num(bounds.worst_statistic) + "], min eig/trace = " + num(bounds.worst_eigen) +
                  ", Hermitian defect = " + num(bounds.worst_hermitian)};
}

Outcome marked_machinery() {
  // Constant marks.
  auto c = testing::uniform_pattern(3, 4, 200, 41, true);
  for (auto& e : c.events) e.mark = 7.25;
  const auto zero = marked_dft(c, FrequencyGrid::defaults(4));
  const bool all_zero = std::all_of(zero.values.begin(), zero.values.end(), [](cplx v) { return v == cplx(0.0, 0.0); });

  // Scale invariance of the marked |d_ij|.
  AnalysisOptions o = study_options();
  o.marked = true;
  auto p = testing::uniform_pattern(3, 4, 300, 42, true);
  auto p2 = p;
  for (auto& e : p2.events) e.mark *= 2.0;
  const auto a = analyse(p, o), b = analyse(p2, o);
  double scale_diff = 0.0;
  for (std::size_t k = 0; k < a.partial.pairs.size(); ++k)
    for (std::size_t g = 0; g < a.partial.grid.size(); ++g)
      scale_diff = std::max(scale_diff, std::abs(a.partial.pairs[k].abs_d[g] - b.partial.pairs[k].abs_d[g]));

  // Centred mark-weighted K against a 100-permutation envelope of the largest
  // |value| over the (r, t) grid.
  const std::vector<double> rs{0.05, 0.1}, ts{1.0};
  int inside = 0;
  for (int s = 0; s < kSeeds; ++s) {
    SimSpec spec = poisson_spec(40000 + static_cast<std::uint64_t>(s));
    spec.marks = MarkDistribution{10.0, 2.0};
    auto q = simulate(spec).pattern;
    auto sup_abs = [&](const MultiPattern& m) {
      const auto k = estimate_mark_weighted_K(m, 0, rs, ts);
      double v = 0.0;
      for (double x : k.values) v = std::max(v, std::abs(x));
      return v;
    };
    const double observed = sup_abs(q);
    std::vector<std::size_t> idx;
    std::vector<double> marks;
    for (std::size_t k = 0; k < q.events.size(); ++k)
      if (q.events[k].type == 0) {
        idx.push_back(k);
        marks.push_back(q.events[k].mark);
      }
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    double envelope = 0.0;
    for (int perm = 0; perm < 100; ++perm) {
      std::shuffle(marks.begin(), marks.end(), rng);
      for (std::size_t k = 0; k < idx.size(); ++k) q.events[idx[k]].mark = marks[k];
      envelope = std::max(envelope, sup_abs(q));
    }
    if (observed <= envelope) ++inside;
  }
  return {all_zero && scale_diff <= 1e-10 && inside >= 90,
          std::string("constant marks zero: ") + (all_zero ? "yes" : "no") + ", scale |diff| = " + num(scale_diff) +
              ", inside envelope " + std::to_string(inside) + "/100"};
}

Outcome performance() {
  SimSpec spec = poisson_spec(77);
  spec.components = 5;
  spec.steps = 5;
  spec.rates.assign(5, 1e5 / 25.0);
  const auto p = simulate(spec).pattern;
  const auto grid = FrequencyGrid::defaults(5);
  auto timed = [&](int threads, SpectralField& out) {
    omp_set_num_threads(threads);
    const auto t0 = std::chrono::steady_clock::now();
    out = periodogram_matrix(dft_separable(p, grid));
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    return dt.count();
  };
  SpectralField one, eight;
  const double t1 = timed(1, one);
  const double t8 = timed(8, eight);
  omp_set_num_threads(omp_get_num_procs());
  const bool identical = one.values.size() == eight.values.size() &&
                         std::memcmp(one.values.data(), eight.values.data(), one.values.size() * sizeof(cplx)) == 0;
  return {t1 <= 10.0 && t8 <= 3.0 && identical,
          "n = " + std::to_string(p.size()) + ", grid " + std::to_string(grid.np()) + "x" + std::to_string(grid.nq()) +
              "x" + std::to_string(grid.nu()) + ": 1 thread " + num(t1) + " s, 8 threads " + num(t8) + " s on " +
              std::to_string(omp_get_num_procs()) + " core(s), byte-identical: " + (identical ? "yes" : "no")};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "stdgm_acceptance_determinism";
  fs::remove_all(root);
  const std::string flags =
      " pipeline --seed 5 --smoothing 3,3,0 --xi null:q95 --replicates 40 --per-slice --mark-dist normal:10,2";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + STDGM_CLI + "\"" + flags + " --out \"" + (root / run).string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "pipeline run failed: " + cmd};
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const auto other = root / "b" / entry.path().filename();
    if (!fs::exists(other)) return {false, "missing in second run: " + entry.path().filename().string()};
    if (csv::read_file(entry.path()) != csv::read_file(other))
      return {false, "differs: " + entry.path().filename().string()};
    ++files;
  }
  std::size_t files_b = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(root / "b")) ++files_b;
  fs::remove_all(root);
  return {files > 0 && files == files_b, std::to_string(files) + " artifacts byte-identical"};
}

}  // namespace

int main() {
  criterion(1, "dual-route partial equivalence", dual_route);
  criterion(2, "DFT correctness", dft_correctness);
  criterion(3, "Fourier round trip", round_trip);
  criterion(4, "null specificity", null_specificity);
  criterion(5, "planted-edge sensitivity", planted_edge);
  criterion(6, "Poisson K benchmark", poisson_k);
  criterion(7, "intensity mass", intensity_mass);
  criterion(8, "bound suite", bound_suite);
  criterion(9, "marked machinery", marked_machinery);
  criterion(10, "performance", performance);
  criterion(11, "determinism", determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
