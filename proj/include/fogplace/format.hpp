#ifndef FOGPLACE_FORMAT_HPP
#define FOGPLACE_FORMAT_HPP

#include <cstdint>
#include <cstdio>
#include <string>

#include "fogplace/model.hpp"

namespace fogplace {

/// Shortest decimal form that round-trips the double exactly; keeps CSV
/// output stable across reruns.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  for (int precision = 1; precision < 17; ++precision) {
    char probe[32];
    std::snprintf(probe, sizeof(probe), "%.*g", precision, v);
    double back = 0.0;
    std::sscanf(probe, "%lf", &back);
    if (back == v) return probe;
  }
  return buf;
}

/// FNV-1a over raw bytes.
inline std::uint64_t fnv1a64(const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Digest of the flattened allocation matrix.
inline std::string placement_digest(const Placement& p) {
  return hex64(fnv1a64(p.alloc.data().data(), p.alloc.data().size()));
}

}  // namespace fogplace

#endif  // FOGPLACE_FORMAT_HPP
