#include "gbnn/network.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace gbnn {

bool WeightMatrix::connect(std::size_t a, std::size_t b) noexcept {
  const std::uint64_t bit_b = std::uint64_t{1} << (b & 63);
  std::uint64_t& wa = bits_[a * stride_ + (b >> 6)];
  if (wa & bit_b) return false;
  wa |= bit_b;
  bits_[b * stride_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
  return true;
}

std::size_t WeightMatrix::edge_count() const noexcept {
  std::size_t twice = 0;
  for (auto w : bits_) twice += static_cast<std::size_t>(std::popcount(w));
  return twice / 2;
}

Network::Network(NetworkShape shape)
    : shape_(shape),
      weights_(std::make_shared<WeightMatrix>(shape.fanal_count())),
      activity_(shape.fanal_count()),
      thresholds_(shape.fanal_count()) {}

Network::Network(NetworkShape shape, WeightMatrix weights)
    : shape_(shape), activity_(shape.fanal_count()), thresholds_(shape.fanal_count()) {
  if (weights.size() != shape.fanal_count())
    throw std::invalid_argument("weight matrix size " + std::to_string(weights.size()) + " does not match shape");
  for (std::size_t a = 0; a < weights.size(); ++a) {
    const std::size_t first = shape.cluster_of(a) * shape.ell();
    for (std::size_t b = first; b < first + shape.ell(); ++b)
      if (weights.test(a, b)) throw std::invalid_argument("intra-cluster edge in weight matrix");
  }
  weights_ = std::make_shared<WeightMatrix>(std::move(weights));
}

std::size_t Network::store(const Message& m) {
  const auto fanals = message_flat_fanals(shape_, m);
  if (fanals.size() < 2)
    throw std::invalid_argument("cannot store a message of order " + std::to_string(fanals.size()) +
                                "; a clique needs at least 2 fanals");
  if (weights_.use_count() > 1) weights_ = std::make_shared<WeightMatrix>(*weights_);
  std::size_t added = 0;
  for (std::size_t x = 0; x < fanals.size(); ++x)
    for (std::size_t y = x + 1; y < fanals.size(); ++y) added += weights_->connect(fanals[x], fanals[y]) ? 1 : 0;
  return added;
}

void Network::insert_probe(const Message& probe) {
  const auto fanals = message_flat_fanals(shape_, probe);
  activity_.clear();
  for (auto f : fanals) activity_.set(f);
}

void Network::reset_state() {
  activity_.clear();
  for (auto& t : thresholds_) t = ActivationThreshold{};
}

std::vector<std::uint32_t> Network::active_fanals() const {
  std::vector<std::uint32_t> out;
  active_fanals(out);
  return out;
}

void Network::active_fanals(std::vector<std::uint32_t>& out) const {
  out.clear();
  activity_.for_each_set([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
}

}  // namespace gbnn
