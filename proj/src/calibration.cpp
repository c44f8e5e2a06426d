#include <algorithm>
#include <cmath>
#include <exception>

#include "stdgm/error.hpp"
#include "stdgm/graph.hpp"
#include "stdgm/rng.hpp"

namespace stdgm {

double sample_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorKind::empty_input, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::parameter, "quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

NullCalibration calibrate_null_threshold(const std::vector<std::vector<std::size_t>>& counts_by_step,
                                         const std::vector<std::string>& labels, const AnalysisOptions& options,
                                         int replicates, double quantile, std::uint64_t seed) {
  if (replicates < 1) throw Error(ErrorKind::parameter, "null calibration needs at least one replicate");
  NullCalibration cal;
  cal.quantile = quantile;
  cal.seed = seed;
  cal.replicate_maxima.assign(static_cast<std::size_t>(replicates), 0.0);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < replicates; ++r) {
    try {
      const MultiPattern null = simulate_matched_null(counts_by_step, labels, SplitMix64::derive(seed, static_cast<std::uint64_t>(r)));
      cal.replicate_maxima[static_cast<std::size_t>(r)] = max_abs_d(analyse(null, options).partial);
    } catch (...) {
#pragma omp critical(stdgm_calibration_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  cal.xi = sample_quantile(cal.replicate_maxima, quantile);
  return cal;
}

}  // namespace stdgm
