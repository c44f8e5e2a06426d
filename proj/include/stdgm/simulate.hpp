#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stdgm/pattern.hpp"

namespace stdgm {

/// A pair of components sharing a latent parent process.
struct LinkPair {
  int i = 0;  // 0-based
  int j = 1;
  /// Expected number of shared-parent events per component per time step.
  double offspring_rate = 0.0;
  /// Standard deviation of the isotropic Gaussian offspring displacement.
  double dispersion = 0.01;
};

struct MarkDistribution {
  double mean = 0.0;
  double sd = 1.0;
};

struct SimSpec {
  enum class Kind { homogeneous_poisson, linked_cluster };
  Kind kind = Kind::homogeneous_poisson;
  int components = 3;
  /// Expected independent (background) events per component per time step.
  std::vector<double> rates;
  int steps = 1;
  std::vector<LinkPair> links;
  std::uint64_t seed = 1;
  std::optional<MarkDistribution> marks;

  void validate() const;
  static Kind parse_kind(const std::string& name);
  static std::string kind_name(Kind kind);
};

using EdgeSet = std::set<std::pair<int, int>>;

struct Simulation {
  MultiPattern pattern;  // unit square, labels "1".."d"
  EdgeSet truth;         // 0-based unordered pairs with i < j
};

/// Deterministic given spec.seed. Parents are latent; offspring leaving the unit
/// square are re-drawn around the same parent.
Simulation simulate(const SimSpec& spec);

/// Binomial null with exactly the given per-component per-step counts, uniform on
/// the unit square. Used for threshold calibration against matched counts.
MultiPattern simulate_matched_null(const std::vector<std::vector<std::size_t>>& counts_by_step,
                                   const std::vector<std::string>& labels, std::uint64_t seed);

}  // namespace stdgm
