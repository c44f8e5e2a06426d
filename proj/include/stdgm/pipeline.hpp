#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stdgm/analysis.hpp"
#include "stdgm/classical.hpp"
#include "stdgm/graph.hpp"
#include "stdgm/provenance.hpp"
#include "stdgm/simulate.hpp"

namespace stdgm {

/// Everything a CLI run depends on. Identical configs give identical artifacts.
struct RunConfig {
  // Input: a CSV file, or a simulation when `input` is empty.
  std::string input;
  std::string columns;  // "x=lon,y=lat,..."
  bool time_is_index = false;
  std::string bin_width = "1mo";
  std::string window;  // "x_min,x_max,y_min,y_max" in input units; bounding box when empty

  std::string sim_kind = "linked_cluster";
  int components = 3;
  std::vector<double> rates{300.0, 300.0, 300.0};
  int steps = 4;
  std::string links = "1-2:200:0.002";  // "i-j:offspring_rate:dispersion;..." with 1-based components
  std::string mark_dist;                // "normal:mu,sigma"
  std::uint64_t seed = 1;

  GridSpec grid;
  std::optional<SmoothingWidths> widths;
  bool marked = false;

  std::string xi;  // a number or "null:q95"
  int replicates = 200;
  bool per_slice = false;
  std::string format = "dot";

  std::vector<double> r_grid{0.05, 0.1};
  std::vector<double> t_grid{0.5, 1.0};
  double epsilon = 0.025;
  double delta = 0.25;
  std::string C = "all";
  std::string D = "all";
  bool homogeneous = true;
  std::string edge = "border";
  int cells = 64;
  double spatial_bandwidth = 0.0;  // <= 0 selects Scott's rule
  double temporal_bandwidth = 0.0;

  std::filesystem::path out_dir = "stdgm_out";

  Provenance provenance() const;
  AnalysisOptions analysis_options() const;
  SimSpec sim_spec() const;
};

/// Parses "i-j:rate:dispersion;..." (1-based) into link pairs.
std::vector<LinkPair> parse_links(const std::string& text);
/// Parses "normal:mu,sigma".
MarkDistribution parse_mark_dist(const std::string& text);
/// Parses "h_p,h_q,h_u".
SmoothingWidths parse_widths(const std::string& text);

/// Loads or simulates the input, rescaled to the unit square.
struct InputPattern {
  MultiPattern pattern;
  std::optional<EdgeSet> truth;
  std::size_t duplicates_removed = 0;
};
InputPattern load_input(const RunConfig& config);

/// Resolves the configured threshold; calibrates against matched-count nulls for "null:qNN".
struct Threshold {
  double xi = 0.0;
  std::string source;  // "fixed" or "null:q95"
};
Threshold resolve_threshold(const RunConfig& config, const MultiPattern& pattern);

/// Artifacts written by a subcommand, relative to out_dir, in write order.
using Artifacts = std::vector<std::filesystem::path>;

Artifacts run_ingest(const RunConfig& config);
Artifacts run_simulate(const RunConfig& config);
Artifacts run_classical(const RunConfig& config);
Artifacts run_spectra(const RunConfig& config);
Artifacts run_partial(const RunConfig& config);
Artifacts run_graph(const RunConfig& config);
Artifacts run_invert(const RunConfig& config);
Artifacts run_pipeline(const RunConfig& config);

/// Dispatches by subcommand name; unknown names are usage errors.
Artifacts run(const std::string& subcommand, const RunConfig& config);

}  // namespace stdgm
