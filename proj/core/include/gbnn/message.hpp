#pragma once

// Network shape, fanal addressing and sparse messages.
//
// A network has `chi` clusters of `ell` fanals each. Fanals are addressed by a
// 1-based (cluster, index) pair at the API boundary and by a 0-based flat index
// internally: flat = (cluster - 1) * ell + (index - 1).
//
// A message is a length-chi vector of segments in [0, ell]; segment 0 marks an
// absent, erased or irrelevant cluster.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gbnn/random.hpp"

namespace gbnn {

// Upper bound on chi * ell. Score counters are 16-bit lanes and the dense
// weight matrix is n^2 bits (512 MiB at the bound).
inline constexpr std::size_t kMaxFanals = 65535;

struct FanalId {
  std::uint32_t cluster = 0;  // 1-based
  std::uint32_t index = 0;    // 1-based

  friend bool operator==(const FanalId&, const FanalId&) = default;
  friend auto operator<=>(const FanalId&, const FanalId&) = default;
};

std::string to_string(const FanalId& f);

class NetworkShape {
 public:
  // Throws std::invalid_argument unless chi >= 2, ell >= 1 and chi * ell <= kMaxFanals.
  NetworkShape(std::size_t chi, std::size_t ell);

  std::size_t chi() const noexcept { return chi_; }
  std::size_t ell() const noexcept { return ell_; }
  std::size_t fanal_count() const noexcept { return chi_ * ell_; }

  std::size_t flat(const FanalId& f) const;
  FanalId fanal(std::size_t flat) const;
  // 0-based cluster of a flat index.
  std::size_t cluster_of(std::size_t flat) const noexcept { return flat / ell_; }

  friend bool operator==(const NetworkShape&, const NetworkShape&) = default;

 private:
  std::size_t chi_;
  std::size_t ell_;
};

class Message {
 public:
  using Segment = std::uint16_t;

  Message() = default;
  explicit Message(std::vector<Segment> segments) : segments_(std::move(segments)) {}
  Message(std::initializer_list<Segment> segments) : segments_(segments) {}

  static Message zeros(std::size_t chi) { return Message(std::vector<Segment>(chi, 0)); }

  std::size_t length() const noexcept { return segments_.size(); }
  // Number of nonzero segments.
  std::size_t order() const noexcept;

  // 0-based position.
  Segment operator[](std::size_t pos) const { return segments_[pos]; }
  void set(std::size_t pos, Segment value) { segments_.at(pos) = value; }

  std::span<const Segment> segments() const noexcept { return segments_; }

  friend bool operator==(const Message&, const Message&) = default;

 private:
  std::vector<Segment> segments_;
};

std::string to_string(const Message& m);

// Throws std::invalid_argument if m has the wrong length or a segment exceeds ell.
void validate_message(const NetworkShape& shape, const Message& m);

// One fanal (i, m_i) per nonzero segment, in ascending cluster order.
std::vector<FanalId> message_fanals(const NetworkShape& shape, const Message& m);

// Same as message_fanals, as ascending flat indices.
std::vector<std::uint32_t> message_flat_fanals(const NetworkShape& shape, const Message& m);

// Copy of m with k uniformly chosen nonzero segments zeroed.
// Throws std::invalid_argument if k > order(m).
Message erase_segments(const Message& m, std::size_t k, Rng& rng);

// Copy of m with the given 1-based positions zeroed.
Message erase_at(const Message& m, std::initializer_list<std::size_t> positions);

}  // namespace gbnn
