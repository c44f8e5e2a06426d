#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stdgm {

/// One spatio-temporal event. `type` is a 0-based component index into
/// MultiPattern::labels; `step` is the 1-based discrete time index.
struct Event {
  double x = 0.0;
  double y = 0.0;
  int step = 1;
  int type = 0;
  double mark = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Rectangular observation window, constant over time, in original units.
struct Window {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  int steps = 1;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  friend bool operator==(const Window&, const Window&) = default;
};

/// d component event lists sharing one window and one discrete time axis.
/// Immutable after construction by convention; analyses take it by const&.
struct MultiPattern {
  std::vector<Event> events;
  std::vector<std::string> labels;
  Window window;
  bool has_marks = false;
  /// True once coordinates live on the unit square (window kept for back-transform).
  bool unit_square = false;

  int components() const { return static_cast<int>(labels.size()); }
  int steps() const { return window.steps; }
  std::size_t size() const { return events.size(); }

  std::vector<std::size_t> counts() const;
  /// counts_by_step()[type][step-1]
  std::vector<std::vector<std::size_t>> counts_by_step() const;
  /// Events of one time step, re-indexed to a single-step pattern (T = 1).
  MultiPattern slice(int step) const;
  /// Events of the given components only, labels re-indexed in the given order.
  MultiPattern select(const std::vector<int>& components) const;

  /// Throws stdgm::Error when an invariant of the pattern is violated.
  void validate() const;

  friend bool operator==(const MultiPattern&, const MultiPattern&) = default;
};

}  // namespace stdgm
