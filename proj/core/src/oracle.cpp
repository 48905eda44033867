#include "gbnn/oracle.hpp"

#include <stdexcept>
#include <string>

namespace gbnn {

void MessageStore::add(const Message& m) {
  if (m.length() != chi())
    throw std::invalid_argument("message length " + std::to_string(m.length()) + " != " + std::to_string(chi()));
  for (std::size_t pos = 0; pos < chi(); ++pos) columns_[pos].push_back(m[pos]);
}

Message MessageStore::at(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("message index out of range");
  std::vector<Message::Segment> segs(chi());
  for (std::size_t pos = 0; pos < chi(); ++pos) segs[pos] = columns_[pos][i];
  return Message(std::move(segs));
}

void MessageStore::reserve(std::size_t n) {
  for (auto& c : columns_) c.reserve(n);
}

std::vector<std::size_t> oracle_candidates(const MessageStore& store, const Message& probe) {
  if (probe.length() != store.chi()) throw std::invalid_argument("probe length does not match the store");
  std::vector<std::size_t> known;
  for (std::size_t pos = 0; pos < probe.length(); ++pos)
    if (probe[pos] != 0) known.push_back(pos);
  if (known.empty()) throw std::invalid_argument("probe has no nonzero segment");

  std::vector<std::size_t> out;
  const std::size_t first = known.front();
  const auto value = probe[first];
  const std::size_t n = store.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (store.segment(i, first) != value) continue;
    bool consistent = true;
    for (std::size_t k = 1; k < known.size() && consistent; ++k)
      consistent = store.segment(i, known[k]) == probe[known[k]];
    if (consistent) out.push_back(i);
  }
  return out;
}

std::vector<Message> oracle_retrieve(const MessageStore& store, const Message& probe) {
  std::vector<Message> out;
  for (auto i : oracle_candidates(store, probe)) out.push_back(store.at(i));
  return out;
}

bool oracle_success(const MessageStore& store, const Message& probe, const Message& original,
                    AmbiguityPolicy policy, Rng& rng) {
  const auto candidates = oracle_candidates(store, probe);
  if (candidates.empty()) return false;
  if (policy == AmbiguityPolicy::Strict) return candidates.size() == 1 && store.at(candidates.front()) == original;
  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  return store.at(candidates[pick(rng)]) == original;
}

double oracle_error_rate(const MessageStore& store, std::size_t trials, std::size_t erasures, Rng& rng,
                         AmbiguityPolicy policy) {
  if (store.size() == 0) throw std::invalid_argument("empty message store");
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  std::uniform_int_distribution<std::size_t> pick(0, store.size() - 1);
  std::size_t errors = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Message original = store.at(pick(rng));
    if (erasures >= original.order())
      throw std::invalid_argument("erasures must be below the message order");
    const Message probe = erase_segments(original, erasures, rng);
    if (!oracle_success(store, probe, original, policy, rng)) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(trials);
}

}  // namespace gbnn
