#include "gbnn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "gbnn/network.hpp"

namespace gbnn {
namespace {

// Runs body(begin, end) over [0, count) split into contiguous shards.
template <typename Body>
void parallel_for(std::size_t threads, std::size_t count, Body&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t k = 0; k < threads; ++k) {
    const std::size_t begin = count * k / threads;
    const std::size_t end = count * (k + 1) / threads;
    workers.emplace_back([&, k, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double log_message_space(std::size_t chi, std::size_t c, std::size_t ell) {
  const double log_choose = std::lgamma(static_cast<double>(chi) + 1) - std::lgamma(static_cast<double>(c) + 1) -
                            std::lgamma(static_cast<double>(chi - c) + 1);
  return log_choose + static_cast<double>(c) * std::log(static_cast<double>(ell));
}

std::uint64_t run_seed(std::uint64_t master, std::size_t m, std::size_t trial, const NamedConfig& cfg) {
  return derive_seed(master, m, trial, hash_name(cfg.name) ^ cfg.config.seed);
}

ResultRow make_row(std::string name, std::size_t m, const std::vector<std::uint8_t>& errors,
                   const std::vector<std::uint32_t>& iterations, double wall_ms) {
  ResultRow row;
  row.config = std::move(name);
  row.messages = m;
  row.trials = errors.size();
  std::uint64_t iter_sum = 0;
  for (std::size_t t = 0; t < errors.size(); ++t) {
    row.errors += errors[t];
    iter_sum += iterations[t];
  }
  row.error_rate = static_cast<double>(row.errors) / static_cast<double>(row.trials);
  row.avg_iterations = static_cast<double>(iter_sum) / static_cast<double>(row.trials);
  row.wall_time_ms = wall_ms;
  return row;
}

}  // namespace

void validate_spec(const ExperimentSpec& spec) {
  if (spec.chi < 2) throw SpecError("chi must be at least 2");
  if (spec.ell < 1) throw SpecError("ell must be at least 1");
  if (spec.chi * spec.ell > kMaxFanals) throw SpecError("chi*ell exceeds " + std::to_string(kMaxFanals));
  if (spec.c < 2 || spec.c > spec.chi) throw SpecError("c must lie in [2, chi]");
  if (spec.erasures >= spec.c) throw SpecError("erasures must be below c");
  if (spec.trials < 1) throw SpecError("trials must be at least 1");
  if (spec.message_counts.empty()) throw SpecError("message_counts is empty");
  for (std::size_t k = 0; k < spec.message_counts.size(); ++k) {
    if (spec.message_counts[k] < 1) throw SpecError("message counts must be positive");
    if (k > 0 && spec.message_counts[k] <= spec.message_counts[k - 1])
      throw SpecError("message_counts must be strictly increasing");
  }
  const double needed = std::log(2.0 * static_cast<double>(spec.message_counts.back()));
  if (log_message_space(spec.chi, spec.c, spec.ell) < needed)
    throw SpecError("too few distinct messages of order c for the largest message count");
  if (spec.configs.empty() && !spec.include_oracle) throw SpecError("no [config] block and no oracle");

  std::vector<std::string> names;
  for (const auto& nc : spec.configs) {
    if (nc.name.empty()) throw SpecError("config name is empty");
    if (std::find(names.begin(), names.end(), nc.name) != names.end())
      throw SpecError("duplicate config name '" + nc.name + "'");
    if (spec.include_oracle && nc.name == kOracleConfigName)
      throw SpecError("config name 'ML' is reserved for the oracle");
    names.push_back(nc.name);
    try {
      validate_config(nc.config);
    } catch (const ConfigError& e) {
      throw SpecError("config '" + nc.name + "': " + e.what());
    }
    if (const auto* gw = std::get_if<GwstaParams>(&nc.config.activation); gw && gw->alpha > spec.chi * spec.ell)
      throw SpecError("config '" + nc.name + "': alpha exceeds the fanal count");
  }
}

MessageGenerator::MessageGenerator(NetworkShape shape, std::size_t order, std::uint64_t seed)
    : shape_(shape), order_(order), rng_(seed), clusters_(shape.chi()) {
  if (order < 1 || order > shape.chi()) throw std::invalid_argument("message order must lie in [1, chi]");
  for (std::size_t i = 0; i < clusters_.size(); ++i) clusters_[i] = i;
}

Message MessageGenerator::next() {
  std::uniform_int_distribution<std::size_t> value(1, shape_.ell());
  std::vector<std::size_t> chosen;
  for (;;) {
    chosen.clear();
    std::sample(clusters_.begin(), clusters_.end(), std::back_inserter(chosen), order_, rng_);
    Message m = Message::zeros(shape_.chi());
    for (auto pos : chosen) m.set(pos, static_cast<Message::Segment>(value(rng_)));
    const auto segs = m.segments();
    std::string key(reinterpret_cast<const char*>(segs.data()), segs.size() * sizeof(Message::Segment));
    if (seen_.insert(std::move(key)).second) return m;
  }
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  validate_spec(spec);
  const NetworkShape shape(spec.chi, spec.ell);
  Network net(shape);
  MessageStore store(spec.chi);
  store.reserve(spec.message_counts.back());
  MessageGenerator generator(shape, spec.c, derive_seed(spec.seed, hash_name("messages")));

  std::vector<NamedConfig> configs = spec.configs;
  for (auto& nc : configs)
    if (options.strict_clique) nc.config.criteria.strict_clique = true;

  const std::size_t series = configs.size() + (spec.include_oracle ? 1 : 0);
  std::vector<std::vector<ResultRow>> rows(series);
  const std::size_t trials = spec.trials;

  for (const std::size_t m : spec.message_counts) {
    while (store.size() < m) {
      const Message msg = generator.next();
      net.store(msg);
      store.add(msg);
    }

    std::vector<Message> originals(trials);
    std::vector<Message> probes(trials);
    std::vector<std::vector<std::uint32_t>> expected(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(derive_seed(spec.seed, m, t, hash_name("probe")));
      std::uniform_int_distribution<std::size_t> pick(0, m - 1);
      originals[t] = store.at(pick(rng));
      probes[t] = erase_segments(originals[t], spec.erasures, rng);
      expected[t] = message_flat_fanals(shape, originals[t]);
    }

    for (std::size_t k = 0; k < configs.size(); ++k) {
      const auto& nc = configs[k];
      std::vector<std::uint8_t> errors(trials, 0);
      std::vector<std::uint32_t> iterations(trials, 0);
      const auto start = std::chrono::steady_clock::now();
      parallel_for(options.threads, trials, [&](std::size_t begin, std::size_t end) {
        Network local = net;
        Retriever retriever(nc.config);
        for (std::size_t t = begin; t < end; ++t) {
          const auto result = retriever.retrieve(local, probes[t], run_seed(spec.seed, m, t, nc));
          bool ok = result.status != RetrievalStatus::Failed;
          if (ok && spec.success == SuccessMetric::Exact) ok = result.active_fanals == expected[t];
          if (ok && spec.success == SuccessMetric::Lenient)
            ok = std::includes(result.active_fanals.begin(), result.active_fanals.end(), expected[t].begin(),
                               expected[t].end());
          errors[t] = ok ? 0 : 1;
          iterations[t] = static_cast<std::uint32_t>(result.iterations);
        }
      });
      const std::chrono::duration<double, std::milli> wall = std::chrono::steady_clock::now() - start;
      rows[k].push_back(make_row(nc.name, m, errors, iterations, wall.count()));
      if (options.on_row) options.on_row(rows[k].back());
    }

    if (spec.include_oracle) {
      std::vector<std::uint8_t> errors(trials, 0);
      std::vector<std::uint32_t> iterations(trials, 1);
      const auto start = std::chrono::steady_clock::now();
      parallel_for(options.threads, trials, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
          Rng rng(derive_seed(spec.seed, m, t, hash_name(kOracleConfigName)));
          errors[t] = oracle_success(store, probes[t], originals[t], spec.ml_ambiguity, rng) ? 0 : 1;
        }
      });
      const std::chrono::duration<double, std::milli> wall = std::chrono::steady_clock::now() - start;
      rows.back().push_back(make_row(std::string(kOracleConfigName), m, errors, iterations, wall.count()));
      if (options.on_row) options.on_row(rows.back().back());
    }
  }

  std::vector<ResultRow> out;
  for (auto& series_rows : rows)
    for (auto& r : series_rows) out.push_back(std::move(r));
  return out;
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  if (rows.empty()) throw std::invalid_argument("no rows to write");
  out << "config,M,error_rate,avg_iterations,trials,wall_time_ms\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%zu,%.6f,%.6f,%zu,%.3f\n", r.messages, r.error_rate, r.avg_iterations, r.trials,
                  r.wall_time_ms);
    out << r.config << buf;
  }
  if (!out) throw std::runtime_error("CSV write failed");
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(rows, out);
}

std::vector<std::string> write_gnuplot(const std::vector<ResultRow>& rows, const std::string& stem) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRow*>> by_config;
  for (const auto& r : rows) {
    if (!by_config.count(r.config)) order.push_back(r.config);
    by_config[r.config].push_back(&r);
  }
  std::vector<std::string> paths;
  char buf[128];
  for (const auto& name : order) {
    const std::string path = stem + "." + name + ".dat";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "# M error_rate avg_iterations\n";
    for (const auto* r : by_config[name]) {
      std::snprintf(buf, sizeof buf, "%zu %.6f %.6f\n", r->messages, r->error_rate, r->avg_iterations);
      out << buf;
    }
    paths.push_back(path);
  }
  return paths;
}

}  // namespace gbnn
