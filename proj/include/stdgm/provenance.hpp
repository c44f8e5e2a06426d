#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace stdgm {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Ordered key=value metadata embedded in every artifact.
struct Provenance {
  std::map<std::string, std::string> entries;

  void set(const std::string& key, const std::string& value) { entries[key] = value; }
  /// "key=value\n" lines in key order.
  std::string canonical() const;
  /// Hex FNV-1a of canonical().
  std::string hash() const;
  /// Comment block for CSV files: one "# key=value" line per entry.
  std::string comment_block() const;
};

}  // namespace stdgm
