#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stdgm/analysis.hpp"
#include "stdgm/simulate.hpp"

namespace stdgm {

/// sup over the statistic-bearing grid of |d_ij| for one unordered pair.
struct EdgeStatistic {
  int i = 0;
  int j = 1;
  double sup = 0.0;
  FrequencyPoint argmax{};
  /// False when some grid point of the pair stayed singular after regularisation.
  bool reliable = true;
  friend bool operator==(const EdgeStatistic&, const EdgeStatistic&) = default;
};

struct DependenceGraph {
  std::vector<std::string> labels;
  double xi = 0.0;
  FrequencyGrid grid;
  std::vector<EdgeStatistic> statistics;  // every pair i < j, lexicographic
  std::vector<std::pair<int, int>> edges;  // pairs with sup >= xi
  bool degenerate = false;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> provenance;

  int nodes() const { return static_cast<int>(labels.size()); }
  bool has_edge(int i, int j) const;
  EdgeSet edge_set() const;
  std::vector<int> isolated_nodes() const;
  const EdgeStatistic& statistic(int i, int j) const;

  friend bool operator==(const DependenceGraph&, const DependenceGraph&) = default;
};

std::vector<EdgeStatistic> edge_statistics(const PartialField& partial);

DependenceGraph build_dependence_graph(const PartialField& partial, double xi, std::vector<std::string> labels);
/// Same statistics, edges recomputed for a new threshold.
DependenceGraph with_threshold(DependenceGraph graph, double xi);

std::string to_dot(const DependenceGraph& graph);
std::string to_json(const DependenceGraph& graph);
DependenceGraph graph_from_json(const std::string& text);
/// "dot" or "json"; anything else is a usage error.
std::string export_graph(const DependenceGraph& graph, const std::string& format);

/// Threshold from homogeneous Poisson replicates with the observed per-step counts.
struct NullCalibration {
  double xi = 0.0;
  double quantile = 0.95;
  std::uint64_t seed = 0;
  std::vector<double> replicate_maxima;  // max over pairs of S_ij, one per replicate
};

/// Each replicate is a matched-count binomial pattern run through `analyse`; the
/// statistic is the largest S_ij over all pairs, so the threshold controls the
/// family-wise rate of spurious edges. Replicates run in parallel.
NullCalibration calibrate_null_threshold(const std::vector<std::vector<std::size_t>>& counts_by_step,
                                         const std::vector<std::string>& labels, const AnalysisOptions& options,
                                         int replicates = 200, double quantile = 0.95, std::uint64_t seed = 0);

/// Linear-interpolation sample quantile (type 7).
double sample_quantile(std::vector<double> values, double q);

struct SliceGraphs {
  std::vector<DependenceGraph> slices;  // one per time step, each with T = 1
  /// persistence[k] lists, for statistics[k] of the slice graphs, the slices holding the edge.
  std::vector<std::vector<int>> persistence;
};

/// Re-runs the analysis on every time slice (T = 1) with its own threshold.
SliceGraphs per_slice_graphs(const MultiPattern& pattern, const AnalysisOptions& options,
                             const std::vector<double>& xi_per_slice);

}  // namespace stdgm
