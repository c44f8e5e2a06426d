#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>

namespace stdgm {

using cplx = std::complex<double>;

/// Integer frequency triple; spatial frequencies 2πp, 2πq and temporal 2πu/T.
struct FrequencyPoint {
  int p = 0;
  int q = 0;
  int u = 0;
  friend bool operator==(const FrequencyPoint&, const FrequencyPoint&) = default;
};

/// Rectangular (p, q, u) lattice with p >= 0. Linear index order is p-major,
/// then q, then u.
struct FrequencyGrid {
  int p_max = 16;
  int q_min = -16;
  int q_max = 16;
  int u_min = 0;
  int u_max = 0;
  int steps = 1;  // T, needed for the temporal phase u*t/T
  bool include_dc = false;

  /// p in 0..16, q in -16..16, u in -floor((T-1)/2)..floor(T/2).
  static FrequencyGrid defaults(int steps);

  void validate() const;

  int np() const { return p_max + 1; }
  int nq() const { return q_max - q_min + 1; }
  int nu() const { return u_max - u_min + 1; }
  std::size_t size() const { return static_cast<std::size_t>(np()) * nq() * nu(); }

  bool contains(int p, int q, int u) const {
    return p >= 0 && p <= p_max && q >= q_min && q <= q_max && u >= u_min && u <= u_max;
  }
  std::size_t index(int p, int q, int u) const {
    return (static_cast<std::size_t>(p) * nq() + static_cast<std::size_t>(q - q_min)) * nu() +
           static_cast<std::size_t>(u - u_min);
  }
  FrequencyPoint point(std::size_t index) const {
    const int u = static_cast<int>(index % static_cast<std::size_t>(nu())) + u_min;
    index /= static_cast<std::size_t>(nu());
    const int q = static_cast<int>(index % static_cast<std::size_t>(nq())) + q_min;
    const int p = static_cast<int>(index / static_cast<std::size_t>(nq()));
    return {p, q, u};
  }
  std::optional<std::size_t> dc_index() const {
    if (!contains(0, 0, 0)) return std::nullopt;
    return index(0, 0, 0);
  }
  bool is_dc(std::size_t index) const { return dc_index() == index; }
  /// True when ordinate `index` takes part in sup/threshold statistics.
  bool counts_in_statistics(std::size_t index) const { return include_dc || !is_dc(index); }
  /// True when u covers exactly one period of T residues, so u can wrap.
  bool full_temporal_period() const { return nu() == steps; }

  std::string describe() const;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

/// Half-widths of the rectangular Daniell neighbourhood.
struct SmoothingWidths {
  int p = 1;
  int q = 1;
  int u = 0;

  /// (1,1,0) when T <= 4, (1,1,1) otherwise.
  static SmoothingWidths defaults(int steps);
  int neighbourhood() const { return (2 * p + 1) * (2 * q + 1) * (2 * u + 1); }
  std::string describe() const;

  friend bool operator==(const SmoothingWidths&, const SmoothingWidths&) = default;
};

}  // namespace stdgm
