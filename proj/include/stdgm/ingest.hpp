#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stdgm/pattern.hpp"

namespace stdgm {

/// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = std::int64_t;

/// Parses `YYYY-MM`, `YYYY-MM-DD`, `YYYY-MM-DDTHH:MM[:SS[.fff]][Z]` (space also
/// accepted as the date/time separator). Returns nullopt on malformed input.
std::optional<Timestamp> parse_timestamp(const std::string& text);

/// Duration of one time bin. Calendar months are kept symbolic so that
/// monthly bins follow month boundaries rather than a fixed second count.
struct BinWidth {
  enum class Unit { seconds, months };
  std::int64_t count = 1;
  Unit unit = Unit::months;

  /// "45s", "15min", "6h", "7d", "2w", "1mo".
  static BinWidth parse(const std::string& text);
  std::string to_string() const;
};

struct BinnedTimes {
  std::vector<int> steps;  // 1-based, parallel to the input
  int total_steps = 0;
  Timestamp origin = 0;
};

/// t_idx = 1 + floor((timestamp - origin) / width). Without an explicit origin the
/// earliest timestamp is used (floored to the month start for monthly bins).
BinnedTimes bin_times(const std::vector<Timestamp>& timestamps, const BinWidth& width,
                      std::optional<Timestamp> origin = std::nullopt);

struct ColumnMap {
  std::string x = "x";
  std::string y = "y";
  std::string time = "time";
  std::string type = "type";
  std::string mark = "mark";

  /// Applies "x=lon,y=lat,..." overrides.
  void apply(const std::string& spec);
};

struct LoadOptions {
  ColumnMap columns;
  bool time_is_index = false;
  BinWidth bin_width{};
  std::optional<Timestamp> bin_origin;
  /// Explicit window in original units; default is the bounding box of the events.
  std::optional<Window> window;
  /// Read the mark column when present.
  bool read_marks = true;
};

struct LoadResult {
  MultiPattern pattern;
  std::size_t duplicates_removed = 0;
  std::size_t rows_read = 0;
};

/// Lines starting with '#' are treated as comments and skipped.
LoadResult load_events(const std::filesystem::path& path, const LoadOptions& options = {});
LoadResult load_events_from_string(const std::string& text, const LoadOptions& options = {});

/// Affine map of every event into the unit square. Applying it to a pattern that
/// is already on the unit square returns the pattern unchanged.
MultiPattern rescale_to_unit_square(const MultiPattern& pattern);

/// Writes the ingest schema back out (x, y, time as step index, type, [mark]) with
/// 17 significant digits, so that loading with `time_is_index` reproduces it.
void export_events(const MultiPattern& pattern, const std::filesystem::path& path);
std::string export_events_to_string(const MultiPattern& pattern);

}  // namespace stdgm
