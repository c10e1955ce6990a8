#pragma once

#include <stdexcept>
#include <string>

#include "qvort/field.hpp"

namespace qvort {

// Binary snapshot, little-endian:
//   "QTRB" | u32 version=1 | u32 dims | u32 n | f64 L | f64 t | u64 seed |
//   u32 params_len | params UTF-8 JSON | n^dims interleaved (re,im) f64 pairs,
//   row-major with x fastest.
// Round trips are bit-exact.

struct SnapshotError : std::runtime_error {
  enum class Kind { BadMagic, BadVersion, Truncated, DimensionMismatch, Io };
  SnapshotError(Kind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

void save_snapshot(const WaveField& field, const std::string& path);
WaveField load_snapshot(const std::string& path);

}  // namespace qvort
