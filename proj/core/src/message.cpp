#include "gbnn/message.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace gbnn {

std::string to_string(const FanalId& f) {
  return "(" + std::to_string(f.cluster) + "," + std::to_string(f.index) + ")";
}

NetworkShape::NetworkShape(std::size_t chi, std::size_t ell) : chi_(chi), ell_(ell) {
  if (chi < 2) throw std::invalid_argument("network needs at least 2 clusters, got chi=" + std::to_string(chi));
  if (ell < 1) throw std::invalid_argument("clusters need at least 1 fanal, got ell=" + std::to_string(ell));
  if (chi * ell > kMaxFanals)
    throw std::invalid_argument("chi*ell=" + std::to_string(chi * ell) + " exceeds " + std::to_string(kMaxFanals));
}

std::size_t NetworkShape::flat(const FanalId& f) const {
  if (f.cluster < 1 || f.cluster > chi_ || f.index < 1 || f.index > ell_)
    throw std::out_of_range("fanal " + to_string(f) + " outside network");
  return (f.cluster - 1) * ell_ + (f.index - 1);
}

FanalId NetworkShape::fanal(std::size_t flat) const {
  if (flat >= fanal_count()) throw std::out_of_range("flat fanal index out of range");
  return {static_cast<std::uint32_t>(flat / ell_ + 1), static_cast<std::uint32_t>(flat % ell_ + 1)};
}

std::size_t Message::order() const noexcept {
  return static_cast<std::size_t>(std::count_if(segments_.begin(), segments_.end(), [](Segment s) { return s != 0; }));
}

std::string to_string(const Message& m) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < m.length(); ++i) os << (i ? "," : "") << m[i];
  os << '}';
  return os.str();
}

void validate_message(const NetworkShape& shape, const Message& m) {
  if (m.length() != shape.chi())
    throw std::invalid_argument("message length " + std::to_string(m.length()) + " != chi " +
                                std::to_string(shape.chi()));
  for (std::size_t i = 0; i < m.length(); ++i) {
    if (m[i] > shape.ell())
      throw std::invalid_argument("segment " + std::to_string(i + 1) + " = " + std::to_string(m[i]) +
                                  " exceeds ell " + std::to_string(shape.ell()));
  }
}

std::vector<FanalId> message_fanals(const NetworkShape& shape, const Message& m) {
  validate_message(shape, m);
  std::vector<FanalId> out;
  for (std::size_t i = 0; i < m.length(); ++i)
    if (m[i] != 0) out.push_back({static_cast<std::uint32_t>(i + 1), m[i]});
  return out;
}

std::vector<std::uint32_t> message_flat_fanals(const NetworkShape& shape, const Message& m) {
  validate_message(shape, m);
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < m.length(); ++i)
    if (m[i] != 0) out.push_back(static_cast<std::uint32_t>(i * shape.ell() + (m[i] - 1)));
  return out;
}

Message erase_segments(const Message& m, std::size_t k, Rng& rng) {
  std::vector<std::size_t> nonzero;
  for (std::size_t i = 0; i < m.length(); ++i)
    if (m[i] != 0) nonzero.push_back(i);
  if (k > nonzero.size())
    throw std::invalid_argument("cannot erase " + std::to_string(k) + " segments of a message of order " +
                                std::to_string(nonzero.size()));
  std::vector<std::size_t> chosen;
  chosen.reserve(k);
  std::sample(nonzero.begin(), nonzero.end(), std::back_inserter(chosen), k, rng);
  Message out = m;
  for (auto pos : chosen) out.set(pos, 0);
  return out;
}

Message erase_at(const Message& m, std::initializer_list<std::size_t> positions) {
  Message out = m;
  for (auto p : positions) {
    if (p < 1 || p > m.length()) throw std::out_of_range("erase position out of range");
    out.set(p - 1, 0);
  }
  return out;
}

}  // namespace gbnn
