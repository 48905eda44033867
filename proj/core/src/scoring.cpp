#include "gbnn/scoring.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>
#include <string>

namespace gbnn {
namespace {

// Byte -> eight 16-bit lane increments, split over two u64 words.
constexpr std::array<std::array<std::uint64_t, 2>, 256> make_expansion_table() {
  std::array<std::array<std::uint64_t, 2>, 256> t{};
  for (std::size_t b = 0; b < 256; ++b) {
    for (std::size_t k = 0; k < 4; ++k) {
      t[b][0] |= static_cast<std::uint64_t>((b >> k) & 1U) << (16 * k);
      t[b][1] |= static_cast<std::uint64_t>((b >> (k + 4)) & 1U) << (16 * k);
    }
  }
  return t;
}

constexpr auto kExpand = make_expansion_table();

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(DynamicRule rule) {
  switch (rule) {
    case DynamicRule::SumOfSum: return "sos";
    case DynamicRule::Normalization: return "norm";
    case DynamicRule::SumOfMax: return "som";
  }
  return "?";
}

std::optional<DynamicRule> parse_dynamic_rule(std::string_view text) {
  const auto s = lower(text);
  if (s == "sos" || s == "sum-of-sum") return DynamicRule::SumOfSum;
  if (s == "norm" || s == "normalization") return DynamicRule::Normalization;
  if (s == "som" || s == "sum-of-max") return DynamicRule::SumOfMax;
  return std::nullopt;
}

void Scorer::accumulate(std::span<const std::uint64_t> row, std::vector<std::uint64_t>& lanes) const {
  for (std::size_t j = 0; j < row.size(); ++j) {
    std::uint64_t w = row[j];
    if (!w) continue;
    std::uint64_t* dst = lanes.data() + 16 * j;
    for (std::size_t i = 0; i < 8; ++i, w >>= 8) {
      const auto& e = kExpand[w & 0xff];
      dst[2 * i] += e[0];
      dst[2 * i + 1] += e[1];
    }
  }
}

void Scorer::compute(DynamicRule rule, const Network& net, double gamma, ScoreMap& out) {
  const std::size_t n = net.fanal_count();
  const std::size_t stride = words_for_bits(n);
  const std::size_t ell = net.shape().ell();
  lanes_.assign(16 * stride, 0);
  if (out.size() != n) out.resize(n);
  net.active_fanals(actives_);

  bool fractional = false;
  if (rule == DynamicRule::SumOfSum) {
    for (auto a : actives_) accumulate(net.row(a), lanes_);
  } else {
    // actives_ is ascending, so each cluster's actives are contiguous.
    for (std::size_t begin = 0; begin < actives_.size();) {
      const std::size_t cluster = actives_[begin] / ell;
      std::size_t end = begin + 1;
      while (end < actives_.size() && actives_[end] / ell == cluster) ++end;
      const std::size_t in_cluster = end - begin;
      if (in_cluster == 1) {
        accumulate(net.row(actives_[begin]), lanes_);
      } else if (rule == DynamicRule::SumOfMax) {
        mask_.assign(stride, 0);
        for (std::size_t k = begin; k < end; ++k) {
          const auto row = net.row(actives_[k]);
          for (std::size_t j = 0; j < stride; ++j) mask_[j] |= row[j];
        }
        accumulate(mask_, lanes_);
      } else {
        if (!fractional) fraction_.assign(n, 0.0);
        fractional = true;
        cluster_lanes_.assign(16 * stride, 0);
        for (std::size_t k = begin; k < end; ++k) accumulate(net.row(actives_[k]), cluster_lanes_);
        const double denom = static_cast<double>(in_cluster);
        for (std::size_t f = 0; f < n; ++f) {
          const auto c = count(cluster_lanes_, f);
          if (c) fraction_[f] += static_cast<double>(c) / denom;
        }
      }
      begin = end;
    }
  }

  for (std::size_t f = 0; f < n; ++f) out[f] = static_cast<double>(count(lanes_, f));
  if (fractional)
    for (std::size_t f = 0; f < n; ++f) out[f] += fraction_[f];
  for (auto a : actives_) out[a] += gamma;
}

ScoreMap score(DynamicRule rule, const Network& net, double gamma) {
  Scorer scorer;
  ScoreMap out(net.fanal_count());
  scorer.compute(rule, net, gamma, out);
  return out;
}

ScoreMap score_sos(const Network& net, double gamma) { return score(DynamicRule::SumOfSum, net, gamma); }
ScoreMap score_norm(const Network& net, double gamma) { return score(DynamicRule::Normalization, net, gamma); }
ScoreMap score_som(const Network& net, double gamma) { return score(DynamicRule::SumOfMax, net, gamma); }

}  // namespace gbnn
