#include "stdgm/analysis.hpp"

#include <algorithm>

#include "stdgm/error.hpp"

namespace stdgm {

FrequencyGrid GridSpec::resolve(int steps) const {
  FrequencyGrid g = FrequencyGrid::defaults(steps);
  if (p_max) g.p_max = *p_max;
  if (q_min) g.q_min = *q_min;
  if (q_max) g.q_max = *q_max;
  if (u_min) g.u_min = std::max(*u_min, -((steps - 1) / 2));
  if (u_max) g.u_max = std::min(*u_max, steps / 2);
  g.include_dc = include_dc;
  g.validate();
  return g;
}

Analysis analyse(const MultiPattern& pattern, const AnalysisOptions& options) {
  if (pattern.components() < 3)
    throw Error(ErrorKind::contract, "partial statistics need d >= 3 components (got d=" +
                                         std::to_string(pattern.components()) + "): conditioning on V\\{i,j} is empty");
  Analysis a;
  const FrequencyGrid grid = options.grid.resolve(pattern.steps());
  if (options.marked)
    a.dft = marked_dft(pattern, grid, options.separable);
  else
    a.dft = options.separable ? dft_separable(pattern, grid) : dft(pattern, grid);
  a.raw = periodogram_matrix(a.dft);
  a.smoothed = smooth_spectra(a.raw, options.widths.value_or(SmoothingWidths::defaults(pattern.steps())));
  a.partial = compute_partial(a.smoothed, options.ridge);
  return a;
}

double max_abs_d(const PartialField& partial) {
  double best = 0.0;
  for (const auto& pair : partial.pairs)
    for (std::size_t g = 0; g < partial.grid.size(); ++g)
      if (partial.grid.counts_in_statistics(g) && !partial.singular[g]) best = std::max(best, pair.abs_d[g]);
  return best;
}

}  // namespace stdgm
