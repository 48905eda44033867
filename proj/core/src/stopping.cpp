#include "gbnn/stopping.hpp"

#include <algorithm>
#include <stdexcept>

namespace gbnn {
namespace {

// Common score of all active fanals, if there is one.
std::optional<double> common_score(const RunState& state) {
  if (state.active_now.empty() || state.scores == nullptr) return std::nullopt;
  const auto& scores = *state.scores;
  const double rho = scores[state.active_now.front()];
  for (auto f : state.active_now)
    if (!scores_equal(scores[f], rho)) return std::nullopt;
  return rho;
}

}  // namespace

std::string_view to_string(RetrievalStatus status) {
  switch (status) {
    case RetrievalStatus::Converged: return "converged";
    case RetrievalStatus::EqualScores: return "equal-scores";
    case RetrievalStatus::CliqueFound: return "clique-found";
    case RetrievalStatus::MaxIterations: return "max-iterations";
    case RetrievalStatus::Failed: return "failed";
  }
  return "?";
}

bool check_iter(const RunState& state, std::size_t max_iters) {
  if (max_iters == 0) throw std::invalid_argument("max_iters must be at least 1");
  return state.iteration >= max_iters;
}

bool check_conv(const RunState& state) {
  return std::equal(state.active_now.begin(), state.active_now.end(), state.active_prev.begin(),
                    state.active_prev.end());
}

bool check_eqsc(const RunState& state) { return common_score(state).has_value(); }

bool check_clq(const RunState& state) {
  const auto rho = common_score(state);
  if (!rho) return false;
  const double expected = *rho - (state.gamma - 1.0);
  return scores_equal(static_cast<double>(state.active_now.size()), expected);
}

bool verify_clique(const Network& net, std::span<const std::uint32_t> fanals) {
  for (std::size_t x = 0; x < fanals.size(); ++x)
    for (std::size_t y = x + 1; y < fanals.size(); ++y)
      if (!net.connected(fanals[x], fanals[y])) return false;
  return true;
}

std::optional<RetrievalStatus> evaluate_criteria(const StoppingCriteria& criteria, const RunState& state,
                                                 const Network& net, bool skip_conv) {
  if (criteria.clq && check_clq(state) && (!criteria.strict_clique || verify_clique(net, state.active_now)))
    return RetrievalStatus::CliqueFound;
  if (criteria.eqsc && check_eqsc(state)) return RetrievalStatus::EqualScores;
  if (criteria.conv && !skip_conv && check_conv(state)) return RetrievalStatus::Converged;
  if (criteria.max_iters && check_iter(state, *criteria.max_iters)) return RetrievalStatus::MaxIterations;
  return std::nullopt;
}

}  // namespace gbnn
