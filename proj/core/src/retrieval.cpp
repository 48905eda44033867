#include "gbnn/retrieval.hpp"

#include <cmath>

namespace gbnn {

std::vector<std::string> validate_config(const RetrievalConfig& config) {
  std::vector<std::string> warnings;
  const auto& crit = config.criteria;
  if (crit.empty()) throw ConfigError("at least one stopping criterion is required");
  if (crit.max_iters && *crit.max_iters == 0) throw ConfigError("max_iters must be at least 1");
  if (!std::isfinite(config.gamma) || config.gamma < 0.0) throw ConfigError("gamma must be finite and non-negative");
  if (crit.clq && config.dynamic == DynamicRule::Normalization)
    throw ConfigError("the CLQ criterion needs count-valued scores and cannot be used with NORM");

  if (const auto* gw = std::get_if<GwstaParams>(&config.activation)) {
    if (gw->alpha == 0) throw ConfigError("alpha must be at least 1");
    if (!crit.max_iters) throw ConfigError("GWsTA must be combined with the ITER criterion");
  } else {
    const auto& gl = std::get<GlskoParams>(config.activation);
    if (gl.beta == 0) throw ConfigError("beta must be at least 1");
    if (gl.mu && *gl.mu == 0) throw ConfigError("mu must be at least 1 when set");
    if (crit.conv) warnings.emplace_back("CONV never fires under GLsKO and is ignored");
  }
  return warnings;
}

Retriever::Retriever(RetrievalConfig config) : config_(std::move(config)), warnings_(validate_config(config_)) {}

bool Retriever::activate(Network& net, bool phase_one, Rng& rng) {
  if (const auto* gw = std::get_if<GwstaParams>(&config_.activation)) {
    const double theta = gwsta_threshold(scores_, gw->alpha);
    if (theta <= kScoreTolerance) return false;
    activate_at_threshold(net, scores_, theta);
    return true;
  }
  if (phase_one) {
    const double theta = gwsta_threshold(scores_, 1);
    if (theta <= kScoreTolerance) return false;
    activate_at_threshold(net, scores_, theta);
    for (std::size_t f = 0; f < net.fanal_count(); ++f)
      if (!net.is_active(f)) net.lock(f);
    return true;
  }
  apply_glsko_phase2(net, scores_, std::get<GlskoParams>(config_.activation), rng);
  return true;
}

RetrievalResult Retriever::retrieve(Network& net, const Message& probe, std::uint64_t seed) {
  Rng rng(seed);
  net.reset_state();
  net.insert_probe(probe);
  net.active_fanals(prev_);
  scorer_.compute(config_.dynamic, net, config_.gamma, scores_);
  if (!activate(net, true, rng)) return finish(net, 1, RetrievalStatus::Failed);
  scorer_.compute(config_.dynamic, net, config_.gamma, scores_);
  return run_phase_two(net, rng);
}

RetrievalResult Retriever::resume(Network& net, std::uint64_t seed) {
  Rng rng(seed);
  if (is_glsko())
    for (std::size_t f = 0; f < net.fanal_count(); ++f)
      if (!net.is_active(f)) net.lock(f);
  prev_.clear();
  scorer_.compute(config_.dynamic, net, config_.gamma, scores_);
  return run_phase_two(net, rng);
}

RetrievalResult Retriever::run_phase_two(Network& net, Rng& rng) {
  std::size_t iteration = 1;
  for (;;) {
    net.active_fanals(now_);
    if (now_.empty()) return finish(net, iteration, RetrievalStatus::Failed);
    const RunState state{iteration, now_, prev_, &scores_, config_.gamma};
    if (auto status = evaluate_criteria(config_.criteria, state, net, is_glsko())) return finish(net, iteration, *status);
    prev_.swap(now_);
    ++iteration;
    if (!activate(net, false, rng)) return finish(net, iteration, RetrievalStatus::Failed);
    scorer_.compute(config_.dynamic, net, config_.gamma, scores_);
  }
}

RetrievalResult Retriever::finish(const Network& net, std::size_t iterations, RetrievalStatus status) const {
  RetrievalResult r;
  r.iterations = iterations;
  r.status = status;
  const auto& shape = net.shape();
  r.actives_by_cluster.resize(shape.chi());
  net.active_fanals(r.active_fanals);
  for (auto f : r.active_fanals) {
    const auto id = shape.fanal(f);
    auto& bucket = r.actives_by_cluster[id.cluster - 1];
    bucket.push_back(id.index);
    if (bucket.size() > 1) r.ambiguous = true;
  }
  return r;
}

RetrievalResult retrieve(Network& net, const Message& probe, const RetrievalConfig& config) {
  return Retriever(config).retrieve(net, probe);
}

RetrievalResult resume_retrieval(Network& net, const RetrievalConfig& config) { return Retriever(config).resume(net); }

std::variant<Message, Ambiguous> result_to_message(const RetrievalResult& result, const NetworkShape& shape) {
  if (result.actives_by_cluster.size() != shape.chi())
    throw std::invalid_argument("result does not match the network shape");
  Message m = Message::zeros(shape.chi());
  bool any = false;
  for (std::size_t i = 0; i < shape.chi(); ++i) {
    const auto& bucket = result.actives_by_cluster[i];
    if (bucket.empty()) continue;
    if (bucket.size() > 1) return Ambiguous{result.actives_by_cluster};
    m.set(i, static_cast<Message::Segment>(bucket.front()));
    any = true;
  }
  if (!any) return Ambiguous{result.actives_by_cluster};
  return m;
}

}  // namespace gbnn
