#pragma once

// Binary snapshot of a network's weights.
//
// Layout (all integers little-endian):
//   bytes 0..3   magic "GBNN"
//   u32          format version (kSnapshotVersion)
//   u32          chi
//   u32          ell
//   then for each fanal r in [0, n): the upper-triangle bits of row r, i.e.
//   columns r+1 .. n-1, packed LSB-first into ceil((n-r-1)/64) u64 words.
// Activity and thresholds are not part of a snapshot.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "gbnn/network.hpp"

namespace gbnn {

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const Network& net, std::ostream& out);
void write_snapshot(const Network& net, const std::string& path);

// Throws std::runtime_error on a bad magic, unknown version, truncated stream
// or an edge that violates the chi-partite structure.
Network read_snapshot(std::istream& in);
Network read_snapshot(const std::string& path);

}  // namespace gbnn
