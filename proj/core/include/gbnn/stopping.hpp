#pragma once

// Stopping criteria, evaluated on the state reached after an activation and
// the dynamic rule that follows it.
//
//   ITER  iteration count reached the cap (no clique guarantee)
//   CONV  active set unchanged from the previous iteration
//   EQSC  all active fanals share one score
//   CLQ   all active fanals share one score rho and |V_a| = rho - (gamma - 1)

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "gbnn/network.hpp"
#include "gbnn/scoring.hpp"

namespace gbnn {

enum class RetrievalStatus { Converged, EqualScores, CliqueFound, MaxIterations, Failed };

std::string_view to_string(RetrievalStatus status);

struct RunState {
  std::size_t iteration = 0;
  std::span<const std::uint32_t> active_now;   // ascending flat indices
  std::span<const std::uint32_t> active_prev;  // ascending flat indices
  const ScoreMap* scores = nullptr;
  double gamma = 1.0;
};

// Throws std::invalid_argument if max_iters == 0.
bool check_iter(const RunState& state, std::size_t max_iters);
bool check_conv(const RunState& state);
bool check_eqsc(const RunState& state);
bool check_clq(const RunState& state);

// True iff every pair of the given fanals is connected.
bool verify_clique(const Network& net, std::span<const std::uint32_t> fanals);

struct StoppingCriteria {
  std::optional<std::size_t> max_iters;  // ITER when set
  bool conv = false;
  bool eqsc = false;
  bool clq = false;
  // CLQ additionally checks every pair of active fanals for an edge.
  bool strict_clique = false;

  bool empty() const noexcept { return !max_iters && !conv && !eqsc && !clq; }
};

// Evaluates the enabled criteria in the order CLQ, EQSC, CONV, ITER and
// returns the status of the first one that fires. `net` is only read for
// strict clique checks.
std::optional<RetrievalStatus> evaluate_criteria(const StoppingCriteria& criteria, const RunState& state,
                                                 const Network& net, bool skip_conv = false);

}  // namespace gbnn
