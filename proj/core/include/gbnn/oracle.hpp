#pragma once

// Brute-force maximum-likelihood retrieval over the explicit list of stored
// messages. Under a uniform prior and an erasure channel every stored message
// that agrees with the probe on its nonzero segments is equally likely, so the
// consistent set is the full ML answer.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gbnn/message.hpp"
#include "gbnn/random.hpp"

namespace gbnn {

// Stored messages in insertion order, kept column-major (one column per
// cluster) so that a scan over one segment position is contiguous.
class MessageStore {
 public:
  explicit MessageStore(std::size_t chi) : columns_(chi) {}

  std::size_t chi() const noexcept { return columns_.size(); }
  std::size_t size() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }

  // Throws std::invalid_argument on a length mismatch.
  void add(const Message& m);
  Message at(std::size_t i) const;
  Message::Segment segment(std::size_t message, std::size_t pos) const noexcept { return columns_[pos][message]; }
  void reserve(std::size_t n);

 private:
  std::vector<std::vector<Message::Segment>> columns_;
};

// Indices (ascending) of stored messages consistent with every nonzero segment
// of the probe. Throws std::invalid_argument on an all-zero or mis-sized probe.
std::vector<std::size_t> oracle_candidates(const MessageStore& store, const Message& probe);
std::vector<Message> oracle_retrieve(const MessageStore& store, const Message& probe);

enum class AmbiguityPolicy {
  Strict,      // success only if the original is the single candidate
  RandomPick,  // success if a uniformly drawn candidate equals the original
};

bool oracle_success(const MessageStore& store, const Message& probe, const Message& original,
                    AmbiguityPolicy policy, Rng& rng);

// Monte Carlo error rate: pick a stored message uniformly, erase `erasures`
// segments, count the trial as an error unless the oracle succeeds.
// Throws std::invalid_argument on an empty store, trials == 0, or erasures
// not below a picked message's order.
double oracle_error_rate(const MessageStore& store, std::size_t trials, std::size_t erasures, Rng& rng,
                         AmbiguityPolicy policy = AmbiguityPolicy::Strict);

}  // namespace gbnn
