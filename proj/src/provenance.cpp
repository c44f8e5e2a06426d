#include "stdgm/provenance.hpp"

#include <cstdio>

namespace stdgm {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Provenance::canonical() const {
  std::string out;
  for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
  return out;
}

std::string Provenance::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

std::string Provenance::comment_block() const {
  std::string out;
  for (const auto& [k, v] : entries) out += "# " + k + "=" + v + "\n";
  return out;
}

}  // namespace stdgm
