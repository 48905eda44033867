#pragma once

// Activation rules: elect the next set of active fanals from a score map.
//
// GWsTA keeps every fanal whose score reaches theta, the minimum of the alpha
// highest scores counted with multiplicity; GWTA is GWsTA with alpha = 1.
//
// GLsKO runs GWTA once and locks every fanal left idle (sigma = +inf). After
// that it only kicks losers out: the active fanals holding one of the beta
// lowest distinct nonzero scores. With mu set, at most mu of them leave per
// step, lowest scores first and ties broken by the run's rng.
//
// alpha counts scores with multiplicity while beta counts distinct values.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gbnn/network.hpp"
#include "gbnn/random.hpp"
#include "gbnn/scoring.hpp"

namespace gbnn {

struct GwstaParams {
  std::size_t alpha = 1;
};

struct GlskoParams {
  std::size_t beta = 1;
  std::optional<std::size_t> mu;
};

// Minimum of the alpha largest values. Throws std::invalid_argument if
// alpha == 0 or alpha > scores.size().
double gwsta_threshold(std::span<const double> scores, std::size_t alpha);
inline double gwsta_threshold(const ScoreMap& scores, std::size_t alpha) {
  return gwsta_threshold(scores.values(), alpha);
}

// v = 1 iff lambda >= theta and theta >= sigma, for a caller-chosen theta.
void activate_at_threshold(Network& net, const ScoreMap& scores, double theta);

// activate_at_threshold with theta = gwsta_threshold(scores, alpha). Returns theta.
double apply_gwsta(Network& net, const ScoreMap& scores, const GwstaParams& params);

// GWTA, then lock every idle fanal. Returns theta.
double apply_glsko_phase1(Network& net, const ScoreMap& scores);

struct LoserList {
  // Max score among losers; empty when no active fanal has a nonzero score.
  std::optional<double> theta;
  // Losers in ascending score order, ascending flat index within a score.
  std::vector<std::uint32_t> fanals;
  // Rank (0 = lowest) of each loser's distinct score value, parallel to fanals.
  std::vector<std::uint32_t> rank;
};

// Active fanals whose score is one of the beta lowest distinct nonzero values.
LoserList glsko_losers(const ScoreMap& scores, std::span<const std::uint32_t> actives, std::size_t beta);

struct GlskoStep {
  std::optional<double> theta;
  std::size_t deactivated = 0;
};

// Kicks losers out. Zero-score active fanals are always deactivated first.
// Every deactivated fanal is locked. Throws std::logic_error when nothing is
// active and std::invalid_argument on beta == 0 or mu == 0.
GlskoStep apply_glsko_phase2(Network& net, const ScoreMap& scores, const GlskoParams& params, Rng& rng);

}  // namespace gbnn
