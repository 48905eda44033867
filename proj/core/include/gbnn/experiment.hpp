#pragma once

// Monte Carlo harness: error rate and average iteration count against the
// number of stored messages, for a list of retrieval configurations and
// optionally the brute-force ML oracle.
//
// Streams are derived from the master seed by counter-based splitting:
//   messages      derive(seed, "messages")              shared by all M
//   probe t at M  derive(seed, M, t, "probe")           shared by all configs
//   run t at M    derive(seed, M, t, hash(name) ^ cfg.seed)
// so results do not depend on the worker count or on which other configs run.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "gbnn/message.hpp"
#include "gbnn/oracle.hpp"
#include "gbnn/random.hpp"
#include "gbnn/retrieval.hpp"

namespace gbnn {

inline constexpr std::string_view kOracleConfigName = "ML";

struct NamedConfig {
  std::string name;
  RetrievalConfig config;
};

enum class SuccessMetric {
  Exact,    // final active set equals the stored message's fanals
  Lenient,  // final active set contains them (correct or ambiguous)
};

struct ExperimentSpec {
  std::size_t chi = 0;
  std::size_t ell = 0;
  std::size_t c = 0;
  std::size_t erasures = 0;
  std::vector<std::size_t> message_counts;
  std::size_t trials = 2000;
  std::uint64_t seed = 1;
  std::vector<NamedConfig> configs;
  bool include_oracle = false;
  SuccessMetric success = SuccessMetric::Exact;
  AmbiguityPolicy ml_ambiguity = AmbiguityPolicy::Strict;
  std::vector<std::string> warnings;
};

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws SpecError describing the first violated constraint.
void validate_spec(const ExperimentSpec& spec);

// Flat `key = value` file with `#` comments and `[config <name>]` blocks.
// Throws SpecError with a "line N:" prefix on unknown keys, bad values and
// constraint violations, or a list of every missing mandatory key.
ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec parse_spec_file(const std::string& path);

struct ResultRow {
  std::string config;
  std::size_t messages = 0;  // M
  double error_rate = 0.0;
  double avg_iterations = 0.0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  double wall_time_ms = 0.0;
};

struct RunOptions {
  std::size_t threads = 1;
  bool strict_clique = false;
  // Called after each (config, M) point in computation order.
  std::function<void(const ResultRow&)> on_row;
};

// Rows in config order (oracle last), then ascending M.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

// Distinct uniform random messages of a fixed order: clusters drawn without
// replacement, values uniform in [1, ell]; exact duplicates are redrawn.
class MessageGenerator {
 public:
  MessageGenerator(NetworkShape shape, std::size_t order, std::uint64_t seed);
  Message next();

 private:
  NetworkShape shape_;
  std::size_t order_;
  Rng rng_;
  std::vector<std::size_t> clusters_;
  std::unordered_set<std::string> seen_;
};

// Header `config,M,error_rate,avg_iterations,trials,wall_time_ms`.
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

// One whitespace-separated `M error_rate avg_iterations` file per config,
// named `<stem>.<config>.dat`. Returns the paths written.
std::vector<std::string> write_gnuplot(const std::vector<ResultRow>& rows, const std::string& stem);

}  // namespace gbnn
