#include "stdgm/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "stdgm/csv.hpp"
#include "stdgm/error.hpp"
#include "stdgm/ingest.hpp"
#include "stdgm/inverse.hpp"
#include "stdgm/polar.hpp"
#include "stdgm/rng.hpp"

namespace stdgm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw Error(ErrorKind::usage, "cannot read " + what + " from '" + s + "'");
  return v;
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != std::floor(v)) throw Error(ErrorKind::usage, what + " must be an integer, got '" + s + "'");
  return static_cast<int>(v);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + csv::fmt(v[k]);
  return out;
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "default"; }

}  // namespace

std::vector<LinkPair> parse_links(const std::string& text) {
  std::vector<LinkPair> links;
  for (const auto& item : split(text, ';')) {
    const auto parts = split(item, ':');
    const auto ends = parts.empty() ? std::vector<std::string>{} : split(parts[0], '-');
    if (parts.size() != 3 || ends.size() != 2)
      throw Error(ErrorKind::usage, "link '" + item + "' must look like i-j:offspring_rate:dispersion");
    links.push_back({to_int(ends[0], "link component") - 1, to_int(ends[1], "link component") - 1,
                     to_double(parts[1], "offspring rate"), to_double(parts[2], "dispersion")});
  }
  return links;
}

MarkDistribution parse_mark_dist(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || text.substr(0, colon) != "normal")
    throw Error(ErrorKind::usage, "mark distribution must look like normal:mu,sigma");
  const auto parts = split(text.substr(colon + 1), ',');
  if (parts.size() != 2) throw Error(ErrorKind::usage, "mark distribution must look like normal:mu,sigma");
  return {to_double(parts[0], "mark mean"), to_double(parts[1], "mark sd")};
}

SmoothingWidths parse_widths(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw Error(ErrorKind::usage, "smoothing half-widths must look like hp,hq,hu");
  return {to_int(parts[0], "h_p"), to_int(parts[1], "h_q"), to_int(parts[2], "h_u")};
}

Provenance RunConfig::provenance() const {
  Provenance p;
  p.set("input", input.empty() ? "simulated" : input);
  p.set("columns", columns);
  p.set("time_is_index", time_is_index ? "true" : "false");
  p.set("bin_width", bin_width);
  p.set("window", window);
  if (input.empty()) {
    p.set("sim_kind", sim_kind);
    p.set("components", std::to_string(components));
    p.set("rates", join(rates));
    p.set("steps", std::to_string(steps));
    p.set("links", links);
    p.set("mark_dist", mark_dist);
    p.set("rng", SplitMix64::algorithm);
  }
  p.set("seed", std::to_string(seed));
  p.set("grid", "p_max=" + opt(grid.p_max) + ";q_min=" + opt(grid.q_min) + ";q_max=" + opt(grid.q_max) +
                    ";u_min=" + opt(grid.u_min) + ";u_max=" + opt(grid.u_max) +
                    ";include_dc=" + (grid.include_dc ? "true" : "false"));
  p.set("smoothing", widths ? widths->describe() : "default");
  p.set("marked", marked ? "true" : "false");
  p.set("xi", xi);
  p.set("replicates", std::to_string(replicates));
  p.set("per_slice", per_slice ? "true" : "false");
  p.set("format", format);
  p.set("r_grid", join(r_grid));
  p.set("t_grid", join(t_grid));
  p.set("epsilon", csv::fmt(epsilon));
  p.set("delta", csv::fmt(delta));
  p.set("C", C);
  p.set("D", D);
  p.set("homogeneous", homogeneous ? "true" : "false");
  p.set("edge", edge);
  p.set("cells", std::to_string(cells));
  p.set("spatial_bandwidth", csv::fmt(spatial_bandwidth));
  p.set("temporal_bandwidth", csv::fmt(temporal_bandwidth));
  const std::string hash = p.hash();
  p.set("config_hash", hash);
  return p;
}

AnalysisOptions RunConfig::analysis_options() const {
  AnalysisOptions o;
  o.grid = grid;
  o.widths = widths;
  o.marked = marked;
  return o;
}

SimSpec RunConfig::sim_spec() const {
  SimSpec s;
  s.kind = SimSpec::parse_kind(sim_kind);
  s.components = components;
  s.rates = rates;
  if (s.rates.size() == 1 && components > 1) s.rates.assign(static_cast<std::size_t>(components), rates.front());
  s.steps = steps;
  if (s.kind == SimSpec::Kind::linked_cluster) s.links = parse_links(links);
  s.seed = seed;
  if (!mark_dist.empty()) s.marks = parse_mark_dist(mark_dist);
  return s;
}

InputPattern load_input(const RunConfig& config) {
  InputPattern in;
  if (config.input.empty()) {
    Simulation sim = simulate(config.sim_spec());
    in.pattern = std::move(sim.pattern);
    in.truth = std::move(sim.truth);
  } else {
    LoadOptions lo;
    if (!config.columns.empty()) lo.columns.apply(config.columns);
    lo.time_is_index = config.time_is_index;
    lo.bin_width = BinWidth::parse(config.bin_width);
    if (!config.window.empty()) {
      const auto parts = split(config.window, ',');
      if (parts.size() != 4) throw Error(ErrorKind::usage, "window must look like x_min,x_max,y_min,y_max");
      lo.window = Window{to_double(parts[0], "x_min"), to_double(parts[1], "x_max"), to_double(parts[2], "y_min"),
                         to_double(parts[3], "y_max"), 1};
    }
    LoadResult r = load_events(config.input, lo);
    in.duplicates_removed = r.duplicates_removed;
    in.pattern = rescale_to_unit_square(r.pattern);
  }
  in.pattern.validate();
  if (config.marked && !in.pattern.has_marks)
    throw Error(ErrorKind::contract, "marked analysis requested but the input carries no marks");
  return in;
}

Threshold resolve_threshold(const RunConfig& config, const MultiPattern& pattern) {
  if (config.xi.empty()) throw Error(ErrorKind::usage, "a threshold is required: --xi <value> or --xi null:q95");
  if (config.xi.rfind("null:q", 0) == 0) {
    const double q = to_double(config.xi.substr(6), "null quantile") / 100.0;
    const auto cal = calibrate_null_threshold(pattern.counts_by_step(), pattern.labels, config.analysis_options(),
                                              config.replicates, q, SplitMix64::derive(config.seed, 0x6e756c6cULL));
    return {cal.xi, config.xi};
  }
  return {to_double(config.xi, "xi"), "fixed"};
}

namespace {

// Shared state for the writers of one run.
struct Run {
  const RunConfig& config;
  Provenance provenance;
  Artifacts artifacts;

  explicit Run(const RunConfig& c) : config(c), provenance(c.provenance()) {}

  void write(const fs::path& name, const std::string& body) {
    csv::write_file(config.out_dir / name, body);
    artifacts.push_back(name);
  }
  void write_csv(const fs::path& name, const Provenance& extra, const std::string& header, const std::string& rows) {
    Provenance p = provenance;
    for (const auto& [k, v] : extra.entries) p.set(k, v);
    write(name, p.comment_block() + header + "\n" + rows);
  }
};

Provenance spectral_meta(const SpectralField& f) {
  Provenance p;
  p.set("grid_resolved", f.grid.describe());
  p.set("normalisation", f.normalisation == Normalisation::sqrt_counts ? "sqrt_counts" : "unit");
  p.set("smoothing_resolved", f.widths.describe());
  p.set("min_neighbourhood", std::to_string(f.min_neighbourhood));
  return p;
}

std::string label(const MultiPattern& p, int i) { return csv::quote(p.labels[static_cast<std::size_t>(i)]); }

std::string freq(const FrequencyGrid& grid, std::size_t g) {
  const auto w = grid.point(g);
  return std::to_string(w.p) + "," + std::to_string(w.q) + "," + std::to_string(w.u);
}

void write_events(Run& run, const InputPattern& in) {
  Provenance extra;
  extra.set("duplicates_removed", std::to_string(in.duplicates_removed));
  Provenance p = run.provenance;
  for (const auto& [k, v] : extra.entries) p.set(k, v);
  run.write("events.csv", p.comment_block() + export_events_to_string(in.pattern));
}

void write_summary(Run& run, const InputPattern& in) {
  const MultiPattern& p = in.pattern;
  const auto counts = p.counts();
  const double area = p.window.area();
  json comps = json::array();
  for (int i = 0; i < p.components(); ++i) {
    const double n = static_cast<double>(counts[static_cast<std::size_t>(i)]);
    comps.push_back({{"label", p.labels[static_cast<std::size_t>(i)]},
                     {"count", counts[static_cast<std::size_t>(i)]},
                     {"intensity_unit_square", n},
                     {"intensity_unit_square_per_step", n / p.steps()},
                     {"intensity_original_units", area > 0 ? n / area : 0.0},
                     {"intensity_original_units_per_step", area > 0 ? n / area / p.steps() : 0.0}});
  }
  json doc = {{"components", comps},
              {"d", p.components()},
              {"n", p.size()},
              {"T", p.steps()},
              {"duplicates_removed", in.duplicates_removed},
              {"window", {{"x_min", p.window.x_min}, {"x_max", p.window.x_max}, {"y_min", p.window.y_min},
                          {"y_max", p.window.y_max}}},
              {"has_marks", p.has_marks},
              {"provenance", run.provenance.entries}};
  run.write("summary.json", doc.dump(2) + "\n");
}

void write_truth(Run& run, const InputPattern& in) {
  if (!in.truth) return;
  const SimSpec spec = run.config.sim_spec();
  json edges = json::array();
  for (const auto& [i, j] : *in.truth)
    edges.push_back({in.pattern.labels[static_cast<std::size_t>(i)], in.pattern.labels[static_cast<std::size_t>(j)]});
  json links = json::array();
  for (const auto& l : spec.links)
    links.push_back({{"i", l.i + 1}, {"j", l.j + 1}, {"offspring_rate", l.offspring_rate}, {"dispersion", l.dispersion}});
  json doc = {{"truth_edges", edges},
              {"spec",
               {{"kind", SimSpec::kind_name(spec.kind)},
                {"components", spec.components},
                {"rates", spec.rates},
                {"steps", spec.steps},
                {"links", links},
                {"seed", spec.seed},
                {"rng", SplitMix64::algorithm}}},
              {"provenance", run.provenance.entries}};
  run.write("truth.json", doc.dump(2) + "\n");
}

std::vector<int> resolve_types(const MultiPattern& p, const std::string& spec) {
  if (spec.empty() || spec == "all") return {};
  std::vector<int> out;
  for (const auto& item : split(spec, ',')) {
    const auto it = std::find(p.labels.begin(), p.labels.end(), item);
    if (it != p.labels.end()) {
      out.push_back(static_cast<int>(it - p.labels.begin()));
      continue;
    }
    throw Error(ErrorKind::usage, "unknown type label '" + item + "'");
  }
  return out;
}

void write_classical(Run& run, const MultiPattern& p) {
  const RunConfig& c = run.config;
  const double hs = c.spatial_bandwidth > 0 ? c.spatial_bandwidth : scott_spatial_bandwidth(p);
  const double ht = c.temporal_bandwidth > 0 ? c.temporal_bandwidth : scott_temporal_bandwidth(p);
  Provenance meta;
  meta.set("spatial_bandwidth_used", csv::fmt(hs));
  meta.set("temporal_bandwidth_used", csv::fmt(ht));

  const auto surface = estimate_spatial_intensity(p, hs, c.cells);
  std::string rows;
  for (int iy = 0; iy < c.cells; ++iy)
    for (int ix = 0; ix < c.cells; ++ix)
      rows += std::to_string(ix) + "," + std::to_string(iy) + "," + csv::fmt((ix + 0.5) / c.cells) + "," +
              csv::fmt((iy + 0.5) / c.cells) + "," + csv::fmt(surface.at(ix, iy)) + "\n";
  run.write_csv("intensity_space.csv", meta, "ix,iy,x,y,value", rows);

  const auto time = estimate_temporal_intensity(p, ht);
  rows.clear();
  for (std::size_t t = 0; t < time.size(); ++t) rows += std::to_string(t + 1) + "," + csv::fmt(time[t]) + "\n";
  run.write_csv("intensity_time.csv", meta, "t,value", rows);

  SecondOrderOptions so;
  so.edge = c.edge == "none" ? EdgeCorrection::none : EdgeCorrection::border;
  if (c.edge != "none" && c.edge != "border") throw Error(ErrorKind::usage, "edge must be border or none");
  so.intensity.kind = c.homogeneous ? IntensityPlugin::Kind::homogeneous : IntensityPlugin::Kind::separable_kernel;
  so.intensity.spatial_bandwidth = hs;
  so.intensity.temporal_bandwidth = ht;
  so.intensity.cells = c.cells;

  rows.clear();
  auto emit = [&](const CurveEstimate& est, const std::string& C, const std::string& D) {
    for (std::size_t ir = 0; ir < est.r_grid.size(); ++ir)
      for (std::size_t it = 0; it < est.t_grid.size(); ++it)
        rows += csv::fmt(est.r_grid[ir]) + "," + csv::fmt(est.t_grid[it]) + "," + csv::fmt(est.at(ir, it)) + "," +
                to_string(est.kind) + "," + csv::quote(C) + "," + csv::quote(D) + "\n";
  };
  emit(estimate_marked_K(p, resolve_types(p, c.C), resolve_types(p, c.D), c.r_grid, c.t_grid, so), c.C, c.D);
  emit(estimate_pair_correlation(p, resolve_types(p, c.C), c.r_grid, c.t_grid, c.epsilon, c.delta, so), c.C, c.C);
  if (p.has_marks)
    for (int i = 0; i < p.components(); ++i)
      emit(estimate_mark_weighted_K(p, i, c.r_grid, c.t_grid, so), p.labels[static_cast<std::size_t>(i)],
           p.labels[static_cast<std::size_t>(i)]);
  run.write_csv("classical.csv", meta, "r,t,value,kind,C,D", rows);
}

struct Spectra {
  DftField dft;
  SpectralField raw;
  SpectralField smoothed;
};

Spectra compute_spectra(const RunConfig& c, const MultiPattern& p) {
  const AnalysisOptions o = c.analysis_options();
  const FrequencyGrid grid = o.grid.resolve(p.steps());
  Spectra s;
  s.dft = o.marked ? marked_dft(p, grid) : dft_separable(p, grid);
  s.raw = periodogram_matrix(s.dft);
  s.smoothed = smooth_spectra(s.raw, o.widths.value_or(SmoothingWidths::defaults(p.steps())));
  return s;
}

void write_spectra(Run& run, const MultiPattern& p, const Spectra& s) {
  const auto& grid = s.raw.grid;
  const int d = p.components();
  const Provenance meta = spectral_meta(s.smoothed);
  std::string rows;
  const std::string smooth_kind = s.smoothed.marked ? "marked" : "smoothed";
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        const std::string head = freq(grid, g) + "," + label(p, i) + "," + label(p, j) + ",";
        const cplx r = s.raw(g, i, j), m = s.smoothed(g, i, j);
        rows += head + csv::fmt(r.real()) + "," + csv::fmt(r.imag()) + "," + (s.raw.marked ? "marked_raw" : "raw") + "\n";
        rows += head + csv::fmt(m.real()) + "," + csv::fmt(m.imag()) + "," + smooth_kind + "\n";
      }
  run.write_csv("spectra.csv", meta, "p,q,u,i,j,re,im,kind", rows);

  rows.clear();
  std::string polar_rows;
  auto add_polar = [&](const std::string& name, const std::vector<double>& field) {
    for (const auto& ps : {r_spectrum(grid, field), theta_spectrum(grid, field)})
      for (std::size_t ui = 0; ui < ps.u_values.size(); ++ui)
        for (std::size_t b = 0; b < ps.abscissa.size(); ++b)
          polar_rows += csv::quote(name) + "," + (ps.kind == PolarSpectrum::Kind::radial ? "R" : "Theta") + "," +
                        csv::fmt(ps.abscissa[b]) + "," + std::to_string(ps.u_values[ui]) + "," +
                        csv::fmt(ps.values[ui][b]) + "," + std::to_string(ps.counts[ui][b]) + "\n";
  };
  for (int i = 0; i < d; ++i) {
    std::vector<double> auto_i(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) auto_i[g] = s.smoothed(g, i, i).real();
    add_polar("f_" + p.labels[static_cast<std::size_t>(i)], auto_i);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const auto coh = coherence(s.smoothed, i, j);
      const auto dec = decompose_cross_spectrum(s.smoothed, i, j);
      const auto gain = gain_spectrum(s.smoothed, i, j);
      for (std::size_t g = 0; g < grid.size(); ++g)
        rows += freq(grid, g) + "," + label(p, i) + "," + label(p, j) + "," + csv::fmt(coh[g]) + "," +
                csv::fmt(dec.co[g]) + "," + csv::fmt(dec.quadrature[g]) + "," + csv::fmt(dec.amplitude[g]) + "," +
                csv::fmt(dec.phase[g]) + "," + csv::fmt(gain[g]) + "\n";
      add_polar("coherence_" + p.labels[static_cast<std::size_t>(i)] + "_" + p.labels[static_cast<std::size_t>(j)], coh);
    }
  run.write_csv("coherence.csv", meta, "p,q,u,i,j,coherence,co,quadrature,amplitude,phase,gain", rows);
  run.write_csv("polar.csv", meta, "statistic,kind,bin,u,value,count", polar_rows);

  // Dot-type statistics, with the multiple coherence on V\{i} as a side-by-side diagnostic.
  rows.clear();
  for (int i = 0; i < d; ++i) {
    const auto dot = dot_spectrum(s.smoothed, i);
    const auto dgain = dot_gain_spectrum(s.smoothed, i);
    std::vector<int> others;
    for (int j = 0; j < d; ++j)
      if (j != i) others.push_back(j);
    std::vector<double> multiple(grid.size(), std::numeric_limits<double>::quiet_NaN());
    try {
      multiple = multiple_coherence(s.smoothed, i, others);
    } catch (const Error&) {
      // Singular f_JJ somewhere (e.g. raw-like input); the diagnostic column stays NaN.
    }
    for (std::size_t g = 0; g < grid.size(); ++g)
      rows += freq(grid, g) + "," + label(p, i) + "," + csv::fmt(dot.cross[g].real()) + "," +
              csv::fmt(dot.cross[g].imag()) + "," + csv::fmt(dot.dot_auto[g]) + "," + csv::fmt(dot.coherence[g]) + "," +
              csv::fmt(dgain[g]) + "," + csv::fmt(multiple[g]) + "\n";
  }
  run.write_csv("dot.csv", meta, "p,q,u,i,dot_re,dot_im,dot_auto,dot_coherence,dot_gain,multiple_coherence", rows);
}

void write_partial(Run& run, const MultiPattern& p, const Spectra& s, const PartialField& pf) {
  Provenance meta = spectral_meta(s.smoothed);
  meta.set("degenerate", pf.degenerate ? "true" : "false");
  for (std::size_t k = 0; k < pf.warnings.size(); ++k) meta.set("warning_" + std::to_string(k + 1), pf.warnings[k]);
  std::string rows;
  for (const auto& pair : pf.pairs)
    for (std::size_t g = 0; g < pf.grid.size(); ++g)
      rows += freq(pf.grid, g) + "," + label(p, pair.i) + "," + label(p, pair.j) + "," +
              csv::fmt(pair.cross[g].real()) + "," + csv::fmt(pair.cross[g].imag()) + "," +
              csv::fmt(pair.abs_d[g]) + "," + csv::fmt(pf.ridge[g]) + "," + (pf.singular[g] ? "1" : "0") + "\n";
  run.write_csv("partial.csv", meta, "p,q,u,i,j,re,im,abs_d,ridge,singular", rows);
}

DependenceGraph make_graph(const Run& run, const MultiPattern& p, const PartialField& pf, const Threshold& th,
                           const SpectralField& smoothed) {
  DependenceGraph g = build_dependence_graph(pf, th.xi, p.labels);
  g.provenance = run.provenance.entries;
  g.provenance["xi_source"] = th.source;
  for (const auto& [k, v] : spectral_meta(smoothed).entries) g.provenance[k] = v;
  return g;
}

void write_graph_files(Run& run, const std::string& stem, const DependenceGraph& g, bool both) {
  if (both || run.config.format == "dot") run.write(stem + ".dot", to_dot(g));
  if (both || run.config.format == "json") run.write(stem + ".json", to_json(g));
  if (!both && run.config.format != "dot" && run.config.format != "json") export_graph(g, run.config.format);
}

void write_slices(Run& run, const MultiPattern& p, bool both) {
  const AnalysisOptions o = run.config.analysis_options();
  std::vector<double> xis;
  std::vector<std::string> sources;
  for (int t = 1; t <= p.steps(); ++t) {
    const Threshold th = resolve_threshold(run.config, p.slice(t));
    xis.push_back(th.xi);
    sources.push_back(th.source);
  }
  SliceGraphs sg = per_slice_graphs(p, o, xis);
  std::string rows;
  for (std::size_t t = 0; t < sg.slices.size(); ++t) {
    auto& g = sg.slices[t];
    const auto slice_prov = g.provenance;
    g.provenance = run.provenance.entries;
    for (const auto& [k, v] : slice_prov) g.provenance[k] = v;
    g.provenance["xi_source"] = sources[t];
    write_graph_files(run, "slice_" + std::to_string(t + 1), g, both);
  }
  if (!sg.slices.empty()) {
    const auto& stats = sg.slices.front().statistics;
    for (std::size_t k = 0; k < stats.size(); ++k) {
      std::string present;
      for (std::size_t t = 0; t < sg.persistence[k].size(); ++t)
        present += (t ? ";" : "") + std::to_string(sg.persistence[k][t]);
      rows += label(p, stats[k].i) + "," + label(p, stats[k].j) + "," + std::to_string(sg.persistence[k].size()) +
              "," + csv::quote(present) + "\n";
    }
  }
  run.write_csv("slice_persistence.csv", {}, "i,j,slices_with_edge,slices", rows);
}

void write_lags(Run& run, const MultiPattern& p, const Spectra& s) {
  const SpectralField& f = s.smoothed;
  const LagGrid lags = LagGrid::conjugate_to(f.grid);
  std::string rows, atoms;
  auto emit = [&](const LagField& field) {
    for (const auto& series : field.series) {
      for (std::size_t k = 0; k < lags.size(); ++k) {
        int a = 0, b = 0, h = 0;
        lags.lag(k, a, b, h);
        rows += csv::fmt(lags.cx(a)) + "," + csv::fmt(lags.cy(b)) + "," + std::to_string(h) + "," +
                label(p, series.i) + "," + label(p, series.j) + "," + csv::fmt(series.values[k]) + "," +
                to_string(field.kind) + "," + csv::quote(field.conditioning) + "\n";
      }
      atoms += label(p, series.i) + "," + label(p, series.j) + "," + to_string(field.kind) + "," +
               csv::quote(field.conditioning) + "," + csv::fmt(series.zero_lag) + "," +
               csv::fmt(series.imag_residue) + "\n";
    }
  };
  const CompleteCovariance complete = inverse_transform(f);
  emit(complete.auto_terms);
  emit(complete.cross_terms);
  std::vector<double> intensities;
  for (auto n : p.counts()) intensities.push_back(static_cast<double>(n) / p.steps());
  emit(scaled_covariance(complete.cross_terms, intensities));
  if (f.dim >= 3)
    for (int i = 0; i < f.dim; ++i)
      for (int j = i + 1; j < f.dim; ++j) {
        std::vector<int> rest;
        for (int k = 0; k < f.dim; ++k)
          if (k != i && k != j) rest.push_back(k);
        const PartialLag pl = partial_lag_characteristics(f, i, j, rest);
        emit(pl.partial_auto);
        emit(pl.partial_cross);
        emit(scaled_covariance(pl.partial_cross, intensities));
      }
  Provenance meta = spectral_meta(f);
  meta.set("lag_grid", "c_x=a/" + std::to_string(lags.na()) + ";c_y=b/" + std::to_string(lags.nb()) +
                           ";h=" + std::to_string(lags.h_min) + ".." + std::to_string(lags.h_min + lags.steps - 1));
  meta.set("inverse_normalisation", "1/" + std::to_string(lags.size()));
  run.write_csv("lag.csv", meta, "c_x,c_y,h,i,j,value,kind,conditioning", rows);
  run.write_csv("lag_atoms.csv", meta, "i,j,kind,conditioning,zero_lag,imag_residue", atoms);
}

void require_partial_dim(const MultiPattern& p) {
  if (p.components() < 3)
    throw Error(ErrorKind::contract, "partial statistics and graphs need d >= 3 components (got d=" +
                                         std::to_string(p.components()) + "): conditioning on V\\{i,j} is empty");
}

}  // namespace

Artifacts run_ingest(const RunConfig& config) {
  Run run(config);
  const InputPattern in = load_input(config);
  write_events(run, in);
  write_summary(run, in);
  return run.artifacts;
}

Artifacts run_simulate(const RunConfig& config) {
  if (!config.input.empty()) throw Error(ErrorKind::usage, "simulate takes no --input");
  Run run(config);
  const InputPattern in = load_input(config);
  write_events(run, in);
  write_truth(run, in);
  return run.artifacts;
}

Artifacts run_classical(const RunConfig& config) {
  Run run(config);
  write_classical(run, load_input(config).pattern);
  return run.artifacts;
}

Artifacts run_spectra(const RunConfig& config) {
  Run run(config);
  const MultiPattern p = load_input(config).pattern;
  write_spectra(run, p, compute_spectra(config, p));
  return run.artifacts;
}

Artifacts run_partial(const RunConfig& config) {
  Run run(config);
  const MultiPattern p = load_input(config).pattern;
  require_partial_dim(p);
  const Spectra s = compute_spectra(config, p);
  write_partial(run, p, s, compute_partial(s.smoothed, config.analysis_options().ridge));
  return run.artifacts;
}

Artifacts run_graph(const RunConfig& config) {
  Run run(config);
  const MultiPattern p = load_input(config).pattern;
  require_partial_dim(p);
  if (config.format != "dot" && config.format != "json")
    throw Error(ErrorKind::usage, "unknown graph format '" + config.format + "' (expected dot or json)");
  const Spectra s = compute_spectra(config, p);
  const PartialField pf = compute_partial(s.smoothed, config.analysis_options().ridge);
  write_graph_files(run, "graph", make_graph(run, p, pf, resolve_threshold(config, p), s.smoothed), false);
  if (config.per_slice) write_slices(run, p, false);
  return run.artifacts;
}

Artifacts run_invert(const RunConfig& config) {
  Run run(config);
  const MultiPattern p = load_input(config).pattern;
  write_lags(run, p, compute_spectra(config, p));
  return run.artifacts;
}

Artifacts run_pipeline(const RunConfig& config) {
  Run run(config);
  const InputPattern in = load_input(config);
  const MultiPattern& p = in.pattern;
  require_partial_dim(p);
  write_events(run, in);
  write_summary(run, in);
  write_truth(run, in);
  write_classical(run, p);
  const Spectra s = compute_spectra(config, p);
  write_spectra(run, p, s);
  const PartialField pf = compute_partial(s.smoothed, config.analysis_options().ridge);
  write_partial(run, p, s, pf);
  const DependenceGraph g = make_graph(run, p, pf, resolve_threshold(config, p), s.smoothed);
  write_graph_files(run, "graph", g, true);
  if (config.per_slice) write_slices(run, p, true);
  write_lags(run, p, s);
  return run.artifacts;
}

Artifacts run(const std::string& subcommand, const RunConfig& config) {
  if (subcommand == "ingest") return run_ingest(config);
  if (subcommand == "simulate") return run_simulate(config);
  if (subcommand == "classical") return run_classical(config);
  if (subcommand == "spectra") return run_spectra(config);
  if (subcommand == "partial") return run_partial(config);
  if (subcommand == "graph") return run_graph(config);
  if (subcommand == "invert") return run_invert(config);
  if (subcommand == "pipeline") return run_pipeline(config);
  throw Error(ErrorKind::usage, "unknown subcommand '" + subcommand + "'");
}

}  // namespace stdgm
