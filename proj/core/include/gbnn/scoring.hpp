#pragma once

// Dynamic rules: the score lambda of every fanal given the current activity.
//
//   SUM-OF-SUM     lambda = gamma*v + number of active fanals connected
//   NORMALIZATION  lambda = gamma*v + sum over clusters i of
//                           (active fanals of i connected) / |v_i|
//   SUM-OF-MAX     lambda = gamma*v + number of clusters holding at least one
//                           connected active fanal
//
// Scores are always computed for every fanal and from scratch.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gbnn/network.hpp"

namespace gbnn {

enum class DynamicRule { SumOfSum, Normalization, SumOfMax };

std::string_view to_string(DynamicRule rule);
// Accepts "sos", "norm", "som" (case-insensitive) and the long names.
std::optional<DynamicRule> parse_dynamic_rule(std::string_view text);

// NORM sums 1/|v_i| terms, which are not exact in binary floating point; all
// score comparisons go through this tolerance. SOS and SOM scores are exact
// small integers so the tolerance never changes their ordering.
inline constexpr double kScoreTolerance = 1e-9;

inline bool scores_equal(double a, double b) noexcept {
  const double d = a - b;
  return d <= kScoreTolerance && d >= -kScoreTolerance;
}

class ScoreMap {
 public:
  ScoreMap() = default;
  explicit ScoreMap(std::size_t n) : lambda_(n, 0.0) {}
  explicit ScoreMap(std::vector<double> lambda) : lambda_(std::move(lambda)) {}

  std::size_t size() const noexcept { return lambda_.size(); }
  double operator[](std::size_t flat) const noexcept { return lambda_[flat]; }
  double& operator[](std::size_t flat) noexcept { return lambda_[flat]; }
  std::span<const double> values() const noexcept { return lambda_; }
  void resize(std::size_t n) { lambda_.assign(n, 0.0); }

  bool all_zero() const noexcept {
    for (double x : lambda_)
      if (!scores_equal(x, 0.0)) return false;
    return true;
  }

 private:
  std::vector<double> lambda_;
};

// Reusable scoring workspace. Not thread-safe; use one per worker.
class Scorer {
 public:
  void compute(DynamicRule rule, const Network& net, double gamma, ScoreMap& out);

 private:
  void accumulate(std::span<const std::uint64_t> row, std::vector<std::uint64_t>& lanes) const;
  std::uint32_t count(const std::vector<std::uint64_t>& lanes, std::size_t flat) const noexcept {
    return static_cast<std::uint32_t>((lanes[flat >> 2] >> (16 * (flat & 3))) & 0xffff);
  }

  std::vector<std::uint64_t> lanes_;
  std::vector<std::uint64_t> cluster_lanes_;
  std::vector<std::uint64_t> mask_;
  std::vector<std::uint32_t> actives_;
  std::vector<double> fraction_;
};

ScoreMap score_sos(const Network& net, double gamma);
ScoreMap score_norm(const Network& net, double gamma);
ScoreMap score_som(const Network& net, double gamma);
ScoreMap score(DynamicRule rule, const Network& net, double gamma);

}  // namespace gbnn
