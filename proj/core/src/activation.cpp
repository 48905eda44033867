#include "gbnn/activation.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gbnn {

double gwsta_threshold(std::span<const double> scores, std::size_t alpha) {
  if (alpha == 0) throw std::invalid_argument("alpha must be at least 1");
  if (alpha > scores.size())
    throw std::invalid_argument("alpha=" + std::to_string(alpha) + " exceeds the " + std::to_string(scores.size()) +
                                " available scores");
  // Min-heap of the alpha largest values seen so far.
  std::vector<double> heap;
  heap.reserve(alpha);
  for (double x : scores) {
    if (heap.size() < alpha) {
      heap.push_back(x);
      std::push_heap(heap.begin(), heap.end(), std::greater<>{});
    } else if (x > heap.front()) {
      std::pop_heap(heap.begin(), heap.end(), std::greater<>{});
      heap.back() = x;
      std::push_heap(heap.begin(), heap.end(), std::greater<>{});
    }
  }
  return heap.front();
}

void activate_at_threshold(Network& net, const ScoreMap& scores, double theta) {
  const double cut = theta - kScoreTolerance;
  auto& activity = net.activity();
  for (std::size_t f = 0; f < scores.size(); ++f)
    activity.assign(f, scores[f] >= cut && net.threshold(f).admits(theta));
}

double apply_gwsta(Network& net, const ScoreMap& scores, const GwstaParams& params) {
  const double theta = gwsta_threshold(scores, params.alpha);
  activate_at_threshold(net, scores, theta);
  return theta;
}

double apply_glsko_phase1(Network& net, const ScoreMap& scores) {
  const double theta = apply_gwsta(net, scores, GwstaParams{1});
  for (std::size_t f = 0; f < scores.size(); ++f)
    if (!net.is_active(f)) net.lock(f);
  return theta;
}

LoserList glsko_losers(const ScoreMap& scores, std::span<const std::uint32_t> actives, std::size_t beta) {
  if (beta == 0) throw std::invalid_argument("beta must be at least 1");
  std::vector<std::uint32_t> nonzero;
  for (auto f : actives)
    if (!scores_equal(scores[f], 0.0)) nonzero.push_back(f);
  std::stable_sort(nonzero.begin(), nonzero.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });

  LoserList out;
  std::uint32_t rank = 0;
  double group_value = 0.0;
  for (std::size_t k = 0; k < nonzero.size(); ++k) {
    const double s = scores[nonzero[k]];
    if (k == 0) {
      group_value = s;
    } else if (!scores_equal(s, group_value)) {
      if (++rank == beta) break;
      group_value = s;
    }
    out.fanals.push_back(nonzero[k]);
    out.rank.push_back(rank);
    out.theta = s;
  }
  return out;
}

GlskoStep apply_glsko_phase2(Network& net, const ScoreMap& scores, const GlskoParams& params, Rng& rng) {
  if (params.mu && *params.mu == 0) throw std::invalid_argument("mu must be at least 1 when set");
  const auto actives = net.active_fanals();
  if (actives.empty()) throw std::logic_error("GLsKO phase 2 needs at least one active fanal");

  GlskoStep step;
  for (auto f : actives) {
    if (scores_equal(scores[f], 0.0)) {
      net.set_active(f, false);
      net.lock(f);
      ++step.deactivated;
    }
  }

  auto losers = glsko_losers(scores, actives, params.beta);
  step.theta = losers.theta;
  if (!losers.theta) return step;
  const double theta = *losers.theta;

  if (!params.mu) {
    const double cut = theta + kScoreTolerance;
    for (std::size_t f = 0; f < scores.size(); ++f) {
      if (scores[f] > cut && net.threshold(f).admits(theta)) {
        net.set_active(f, true);
      } else {
        if (net.is_active(f)) ++step.deactivated;
        net.set_active(f, false);
        net.lock(f);
      }
    }
    return step;
  }

  // Shuffle, then order by rank: uniform tie-breaking, lowest scores first.
  std::vector<std::size_t> order(losers.fanals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return losers.rank[a] < losers.rank[b]; });
  const std::size_t evict = std::min(*params.mu, order.size());
  for (std::size_t k = 0; k < evict; ++k) {
    const auto f = losers.fanals[order[k]];
    net.set_active(f, false);
    net.lock(f);
    ++step.deactivated;
  }
  return step;
}

}  // namespace gbnn
