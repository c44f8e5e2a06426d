#include "stdgm/simulate.hpp"

#include "stdgm/error.hpp"
#include "stdgm/rng.hpp"

namespace stdgm {

void SimSpec::validate() const {
  if (components < 2) throw Error(ErrorKind::parameter, "simulation needs at least two components");
  if (steps < 1) throw Error(ErrorKind::parameter, "simulation needs at least one time step");
  if (static_cast<int>(rates.size()) != components)
    throw Error(ErrorKind::parameter, "expected one rate per component");
  for (double r : rates)
    if (!(r > 0.0)) throw Error(ErrorKind::parameter, "component rates must be positive");
  if (kind == Kind::homogeneous_poisson && !links.empty())
    throw Error(ErrorKind::parameter, "homogeneous_poisson takes no link pairs");
  for (const auto& l : links) {
    if (l.i < 0 || l.j < 0 || l.i >= components || l.j >= components || l.i == l.j)
      throw Error(ErrorKind::parameter, "link pair must reference two distinct valid components");
    if (!(l.offspring_rate >= 0.0)) throw Error(ErrorKind::parameter, "offspring rate must be >= 0");
    if (!(l.dispersion > 0.0)) throw Error(ErrorKind::parameter, "dispersion must be > 0");
  }
  if (marks && !(marks->sd >= 0.0)) throw Error(ErrorKind::parameter, "mark sd must be >= 0");
}

SimSpec::Kind SimSpec::parse_kind(const std::string& name) {
  if (name == "homogeneous_poisson" || name == "poisson") return Kind::homogeneous_poisson;
  if (name == "linked_cluster" || name == "linked") return Kind::linked_cluster;
  throw Error(ErrorKind::usage, "unknown simulation kind '" + name + "'");
}

std::string SimSpec::kind_name(Kind kind) {
  return kind == Kind::homogeneous_poisson ? "homogeneous_poisson" : "linked_cluster";
}

namespace {

std::vector<std::string> numbered_labels(int d) {
  std::vector<std::string> labels;
  for (int k = 1; k <= d; ++k) labels.push_back(std::to_string(k));
  return labels;
}

}  // namespace

Simulation simulate(const SimSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  Simulation sim;
  MultiPattern& p = sim.pattern;
  p.labels = numbered_labels(spec.components);
  p.window = Window{0.0, 1.0, 0.0, 1.0, spec.steps};
  p.unit_square = true;
  p.has_marks = spec.marks.has_value();

  auto emit = [&](double x, double y, int step, int type) {
    Event e{x, y, step, type, 0.0};
    if (spec.marks) e.mark = spec.marks->mean + spec.marks->sd * rng.normal();
    p.events.push_back(e);
  };

  for (int step = 1; step <= spec.steps; ++step) {
    for (int c = 0; c < spec.components; ++c) {
      const auto n = rng.poisson(spec.rates[static_cast<std::size_t>(c)]);
      for (std::uint64_t k = 0; k < n; ++k) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        emit(x, y, step, c);
      }
    }
    for (const auto& link : spec.links) {
      const auto parents = rng.poisson(link.offspring_rate);
      for (std::uint64_t k = 0; k < parents; ++k) {
        const double px = rng.uniform();
        const double py = rng.uniform();
        for (const int c : {link.i, link.j}) {
          double x = 0.0, y = 0.0;
          do {
            x = px + link.dispersion * rng.normal();
            y = py + link.dispersion * rng.normal();
          } while (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0);
          emit(x, y, step, c);
        }
      }
    }
  }
  for (const auto& link : spec.links) sim.truth.emplace(std::min(link.i, link.j), std::max(link.i, link.j));
  return sim;
}

MultiPattern simulate_matched_null(const std::vector<std::vector<std::size_t>>& counts_by_step,
                                   const std::vector<std::string>& labels, std::uint64_t seed) {
  SplitMix64 rng(seed);
  MultiPattern p;
  p.labels = labels;
  p.unit_square = true;
  const int steps = counts_by_step.empty() ? 1 : static_cast<int>(counts_by_step.front().size());
  p.window = Window{0.0, 1.0, 0.0, 1.0, steps};
  for (std::size_t c = 0; c < counts_by_step.size(); ++c)
    for (int step = 1; step <= steps; ++step)
      for (std::size_t k = 0; k < counts_by_step[c][static_cast<std::size_t>(step - 1)]; ++k) {
        const double x = rng.uniform();
        const double y = rng.uniform();
        p.events.push_back({x, y, step, static_cast<int>(c), 0.0});
      }
  return p;
}

}  // namespace stdgm
