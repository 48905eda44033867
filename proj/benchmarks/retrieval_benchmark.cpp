#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "gbnn/experiment.hpp"
#include "gbnn/network.hpp"
#include "gbnn/oracle.hpp"
#include "gbnn/retrieval.hpp"
#include "gbnn/scoring.hpp"

namespace {

// chi = 100, ell = 64, c = 12, loaded with M messages; built once per M.
struct Fixture {
  gbnn::Network net{gbnn::NetworkShape(100, 64)};
  gbnn::MessageStore store{100};
  std::vector<gbnn::Message> probes;

  explicit Fixture(std::size_t m) {
    gbnn::MessageGenerator gen(net.shape(), 12, 7);
    for (std::size_t i = 0; i < m; ++i) {
      auto msg = gen.next();
      net.store(msg);
      store.add(msg);
    }
    gbnn::Rng rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    for (int t = 0; t < 64; ++t) probes.push_back(gbnn::erase_segments(store.at(pick(rng)), 3, rng));
  }
};

const Fixture& fixture(std::size_t m) {
  static std::vector<std::pair<std::size_t, std::unique_ptr<Fixture>>> cache;
  for (auto& [key, f] : cache)
    if (key == m) return *f;
  cache.emplace_back(m, std::make_unique<Fixture>(m));
  return *cache.back().second;
}

void BM_Score(benchmark::State& state, gbnn::DynamicRule rule) {
  const auto& fx = fixture(static_cast<std::size_t>(state.range(0)));
  gbnn::Network net = fx.net;
  // A phase-1-like state: the probe plus every fanal of its clique's clusters.
  net.insert_probe(fx.probes[0]);
  for (std::size_t f = 0; f < 64 * 3; ++f) net.set_active(f, true);
  gbnn::Scorer scorer;
  gbnn::ScoreMap scores;
  for (auto _ : state) {
    scorer.compute(rule, net, 1.0, scores);
    benchmark::DoNotOptimize(scores.values().data());
  }
  state.counters["active"] = static_cast<double>(net.active_count());
}
BENCHMARK_CAPTURE(BM_Score, sos, gbnn::DynamicRule::SumOfSum)->Arg(100000);
BENCHMARK_CAPTURE(BM_Score, norm, gbnn::DynamicRule::Normalization)->Arg(100000);
BENCHMARK_CAPTURE(BM_Score, som, gbnn::DynamicRule::SumOfMax)->Arg(100000);

void BM_Retrieve(benchmark::State& state, gbnn::RetrievalConfig config) {
  const auto& fx = fixture(static_cast<std::size_t>(state.range(0)));
  gbnn::Network net = fx.net;
  gbnn::Retriever retriever(config);
  std::size_t t = 0;
  std::size_t iterations = 0;
  for (auto _ : state) {
    const auto r = retriever.retrieve(net, fx.probes[t++ % fx.probes.size()], t);
    iterations += r.iterations;
  }
  state.counters["iterations"] = benchmark::Counter(static_cast<double>(iterations), benchmark::Counter::kAvgIterations);
}

gbnn::RetrievalConfig gwsta(std::size_t alpha, double gamma) {
  gbnn::RetrievalConfig c;
  c.activation = gbnn::GwstaParams{alpha};
  c.criteria.conv = true;
  c.criteria.max_iters = 30;
  c.gamma = gamma;
  return c;
}

gbnn::RetrievalConfig glsko() {
  gbnn::RetrievalConfig c;
  c.activation = gbnn::GlskoParams{1, 1};
  c.criteria.eqsc = true;
  return c;
}

BENCHMARK_CAPTURE(BM_Retrieve, gwsta12, gwsta(12, 1.0))->Arg(50000)->Arg(250000)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Retrieve, gwta, gwsta(1, 1.0))->Arg(50000)->Arg(250000)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Retrieve, gwsta12_g1000, gwsta(12, 1000.0))->Arg(250000)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Retrieve, glsko, glsko())->Arg(50000)->Arg(250000)->Unit(benchmark::kMicrosecond);

void BM_OracleScan(benchmark::State& state) {
  const auto& fx = fixture(static_cast<std::size_t>(state.range(0)));
  std::size_t t = 0;
  for (auto _ : state) benchmark::DoNotOptimize(gbnn::oracle_candidates(fx.store, fx.probes[t++ % fx.probes.size()]));
}
BENCHMARK(BM_OracleScan)->Arg(250000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
