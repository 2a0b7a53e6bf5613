#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dtplace {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sub-seed for a labelled stream. Labels are stable strings so adding a new
// stream never shifts an existing one.
inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view label,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed ^ fnv1a(label)) + index);
}

inline Rng make_stream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
  return Rng(stream_seed(seed, label, index));
}

// N(mean, sd) conditioned on being > 0 by rejection.
inline double positive_normal(Rng& rng, double mean, double sd) {
  std::normal_distribution<double> dist(mean, sd);
  for (;;) {
    const double v = dist(rng);
    if (v > 0.0) return v;
  }
}

}  // namespace dtplace
