#pragma once

// Iterative retrieval of a stored clique from a partially erased probe:
//
//   insert probe; score
//   phase 1: activate; score
//   phase 2: until a stopping criterion fires { activate; score }
//   output the active fanals
//
// Criteria are evaluated before every phase-2 activation, so a clique that
// phase 1 already produced is recognised without another eviction. Phase 1
// counts as iteration 1 and each phase-2 activation adds one.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gbnn/activation.hpp"
#include "gbnn/message.hpp"
#include "gbnn/network.hpp"
#include "gbnn/random.hpp"
#include "gbnn/scoring.hpp"
#include "gbnn/stopping.hpp"

namespace gbnn {

using ActivationRule = std::variant<GwstaParams, GlskoParams>;

struct RetrievalConfig {
  DynamicRule dynamic = DynamicRule::SumOfMax;
  ActivationRule activation = GwstaParams{1};
  StoppingCriteria criteria;
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws ConfigError for a config that cannot run:
//   - no stopping criterion, alpha/beta/mu/max_iters of 0, negative gamma
//   - GWsTA without ITER (it is not guaranteed to meet any other criterion)
//   - CLQ with NORM scores (they are not fanal counts)
// Returns warnings for configs that run but ignore something (CONV under GLsKO).
std::vector<std::string> validate_config(const RetrievalConfig& config);

struct RetrievalResult {
  // Entry i lists the 1-based active indices of cluster i + 1.
  std::vector<std::vector<std::uint32_t>> actives_by_cluster;
  std::vector<std::uint32_t> active_fanals;  // ascending flat indices
  std::size_t iterations = 0;
  RetrievalStatus status = RetrievalStatus::Failed;
  bool ambiguous = false;  // some cluster holds more than one active fanal
};

// Reusable retrieval runner; owns the scoring workspace. One per thread.
class Retriever {
 public:
  // Throws ConfigError (see validate_config).
  explicit Retriever(RetrievalConfig config);

  const RetrievalConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  // Resets the network state, inserts the probe and runs to termination.
  RetrievalResult retrieve(Network& net, const Message& probe) { return retrieve(net, probe, config_.seed); }
  RetrievalResult retrieve(Network& net, const Message& probe, std::uint64_t seed);

  // Continues from the network's current activity as if phase 1 had just
  // produced it (iteration 1). Under GLsKO every idle fanal is locked first.
  RetrievalResult resume(Network& net) { return resume(net, config_.seed); }
  RetrievalResult resume(Network& net, std::uint64_t seed);

 private:
  bool is_glsko() const noexcept { return std::holds_alternative<GlskoParams>(config_.activation); }
  // False on a degenerate step (threshold at zero would activate everything).
  bool activate(Network& net, bool phase_one, Rng& rng);
  RetrievalResult run_phase_two(Network& net, Rng& rng);
  RetrievalResult finish(const Network& net, std::size_t iterations, RetrievalStatus status) const;

  RetrievalConfig config_;
  std::vector<std::string> warnings_;
  Scorer scorer_;
  ScoreMap scores_;
  std::vector<std::uint32_t> now_;
  std::vector<std::uint32_t> prev_;
};

RetrievalResult retrieve(Network& net, const Message& probe, const RetrievalConfig& config);
RetrievalResult resume_retrieval(Network& net, const RetrievalConfig& config);

struct Ambiguous {
  std::vector<std::vector<std::uint32_t>> actives_by_cluster;
};

// The decoded message when every nonempty cluster holds exactly one active
// fanal; Ambiguous otherwise, including when nothing is active.
std::variant<Message, Ambiguous> result_to_message(const RetrievalResult& result, const NetworkShape& shape);

}  // namespace gbnn
