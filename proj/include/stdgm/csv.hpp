#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace stdgm::csv {

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field when it contains a delimiter, quote, or leading/trailing space.
std::string quote(std::string_view field);

/// Shortest round-trip formatting is not required; outputs use 17 significant digits.
std::string fmt(double value);

/// Writes `text` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace stdgm::csv
