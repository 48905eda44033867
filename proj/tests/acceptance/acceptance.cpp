// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//
//   gbnn_acceptance [--only N]...

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gbnn/activation.hpp"
#include "gbnn/experiment.hpp"
#include "gbnn/retrieval.hpp"

using namespace gbnn;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t worker_count() { return std::max(1U, std::thread::hardware_concurrency()); }

RetrievalConfig gwsta(std::size_t alpha, DynamicRule rule, double gamma, std::size_t max_iters, bool conv) {
  RetrievalConfig c;
  c.dynamic = rule;
  c.activation = GwstaParams{alpha};
  c.gamma = gamma;
  c.criteria.conv = conv;
  c.criteria.max_iters = max_iters;
  return c;
}

RetrievalConfig glsko_mu1() {
  RetrievalConfig c;
  c.dynamic = DynamicRule::SumOfMax;
  c.activation = GlskoParams{1, 1};
  c.criteria.eqsc = true;
  return c;
}

// ---------------------------------------------------------------------------
// Criteria 1-5: one sweep at chi=100, ell=64, c=12, 3 erasures, 2000 trials.

class Sweep {
 public:
  static constexpr std::size_t kTrials = 2000;

  void run() {
    ExperimentSpec spec;
    spec.chi = 100;
    spec.ell = 64;
    spec.c = 12;
    spec.erasures = 3;
    spec.message_counts = {50000, 100000, 150000, 200000, 250000};
    spec.trials = kTrials;
    spec.seed = 1;
    spec.include_oracle = true;
    spec.configs = {
        {"som", gwsta(12, DynamicRule::SumOfMax, 1.0, 30, true)},
        {"sos", gwsta(12, DynamicRule::SumOfSum, 1.0, 30, true)},
        {"norm", gwsta(12, DynamicRule::Normalization, 1.0, 30, true)},
        {"gwta", gwsta(1, DynamicRule::SumOfMax, 1.0, 30, true)},
        {"willshaw", gwsta(12, DynamicRule::SumOfMax, 1.0, 1, false)},
        {"glsko_mu1", glsko_mu1()},
        {"gwsta12_g1000", gwsta(12, DynamicRule::SumOfMax, 1000.0, 30, true)},
    };
    RunOptions options;
    options.threads = worker_count();
    options.on_row = [](const ResultRow& r) {
      std::printf("  %-14s M=%-7zu error_rate=%.4f avg_iterations=%6.3f  (%.1f s)\n", r.config.c_str(), r.messages,
                  r.error_rate, r.avg_iterations, r.wall_time_ms / 1000.0);
      std::fflush(stdout);
    };
    for (const auto& r : run_experiment(spec, options)) rows_[{r.config, r.messages}] = r;
    ms_ = spec.message_counts;
  }

  const std::vector<std::size_t>& ms() const { return ms_; }
  double err(const std::string& cfg, std::size_t m) const { return rows_.at({cfg, m}).error_rate; }
  double iters(const std::string& cfg, std::size_t m) const { return rows_.at({cfg, m}).avg_iterations; }
  bool empty() const { return rows_.empty(); }

 private:
  std::vector<std::size_t> ms_;
  std::map<std::pair<std::string, std::size_t>, ResultRow> rows_;
};

double standard_error(double p1, double p2, std::size_t n) {
  const double nn = static_cast<double>(n);
  return std::sqrt(p1 * (1 - p1) / nn + p2 * (1 - p2) / nn);
}

Verdict criterion1(const Sweep& s) {
  Verdict v;
  double max_gap = 0;
  for (std::size_t m : {50000UL, 100000UL, 150000UL, 200000UL}) {
    for (const char* other : {"sos", "norm"}) {
      const double gap = std::abs(s.err(other, m) - s.err("som", m));
      max_gap = std::max(max_gap, gap);
      v.require(gap <= 0.02, fmt("|%s-som|=%.4f at M=%zu", other, gap, m));
    }
  }
  if (v.pass) v.detail = fmt("max |rule - som| = %.4f <= 0.02", max_gap);
  return v;
}

Verdict criterion2(const Sweep& s) {
  Verdict v;
  for (std::size_t m : s.ms()) {
    const double gl = s.err("glsko_mu1", m), gs = s.err("som", m), gt = s.err("gwta", m);
    v.require(gl <= gs + standard_error(gl, gs, Sweep::kTrials),
              fmt("glsko %.4f > gwsta12 %.4f at M=%zu", gl, gs, m));
    v.require(gs <= gt + standard_error(gs, gt, Sweep::kTrials),
              fmt("gwsta12 %.4f > gwta %.4f at M=%zu", gs, gt, m));
  }
  if (v.pass) v.detail = "glsko <= gwsta12 <= gwta (1 SE margin) at every M";
  return v;
}

Verdict criterion3(const Sweep& s) {
  Verdict v;
  std::string gaps;
  std::size_t checked = 0;
  for (std::size_t m : s.ms()) {
    const double ml = s.err("ML", m);
    if (ml > 0.05) continue;
    ++checked;
    const double gap = s.err("glsko_mu1", m) - ml;
    gaps += fmt("%sM=%zu:%.4f", gaps.empty() ? "" : " ", m, gap);
    v.require(gap <= 0.02, fmt("glsko-ML=%.4f at M=%zu", gap, m));
  }
  v.require(checked > 0, "no M with ML error <= 5%");
  v.detail = (v.pass ? "" : v.detail + " | ") + "glsko-ML " + gaps;
  return v;
}

Verdict criterion4(const Sweep& s) {
  Verdict v;
  double max_gap = 0;
  for (std::size_t m : s.ms()) {
    const double gap = std::abs(s.err("willshaw", m) - s.err("gwta", m));
    max_gap = std::max(max_gap, gap);
    v.require(gap <= 0.03, fmt("|willshaw-gwta|=%.4f at M=%zu", gap, m));
  }
  if (v.pass) v.detail = fmt("max |willshaw - gwta| = %.4f <= 0.03", max_gap);
  return v;
}

Verdict criterion5(const Sweep& s) {
  Verdict v;
  double worst = 0;
  for (std::size_t m : s.ms()) {
    const double it = s.iters("gwsta12_g1000", m);
    worst = std::max(worst, it);
    v.require(it <= 4.0, fmt("gamma=1000 avg iterations %.3f at M=%zu", it, m));
  }
  // Plateau at the cap: within 10% of 30 at the largest load.
  const double plateau = s.iters("som", s.ms().back());
  v.require(plateau >= 27.0, fmt("gamma=1 avg iterations %.3f at M=%zu, expected >= 27", plateau, s.ms().back()));
  if (v.pass) v.detail = fmt("gamma=1000 max avg %.3f <= 4; gamma=1 reaches %.3f of cap 30", worst, plateau);
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 6: chi = c = 4, ell = 4. Value relabelling inside each cluster maps
// any stored message onto (1,1,1,1) without changing the retrieval outcome,
// so probing that message covers every (stored set, probed message) pair.

struct SafetyCheck {
  NetworkShape shape{4, 4};
  Message target{1, 1, 1, 1};
  std::vector<std::uint32_t> truth;
  std::vector<Message> probes;
  std::vector<Message> others;
  std::vector<Retriever> retrievers;
  std::size_t sets = 0;
  std::size_t runs = 0;
  std::size_t violations = 0;
  std::string first_violation;

  SafetyCheck() {
    truth = message_flat_fanals(shape, target);
    for (std::size_t a = 1; a <= 4; ++a) probes.push_back(erase_at(target, {a}));
    for (std::size_t a = 1; a <= 4; ++a)
      for (std::size_t b = a + 1; b <= 4; ++b) probes.push_back(erase_at(target, {a, b}));
    for (std::uint16_t x = 0; x < 256; ++x) {
      Message m{static_cast<std::uint16_t>(1 + (x & 3)), static_cast<std::uint16_t>(1 + ((x >> 2) & 3)),
                static_cast<std::uint16_t>(1 + ((x >> 4) & 3)), static_cast<std::uint16_t>(1 + ((x >> 6) & 3))};
      if (m != target) others.push_back(m);
    }
    retrievers.emplace_back(gwsta(1, DynamicRule::SumOfMax, 1.0, 30, true));
    retrievers.emplace_back(gwsta(4, DynamicRule::SumOfMax, 1.0, 30, true));
    retrievers.emplace_back(glsko_mu1());
  }

  void check(const Network& stored, const std::vector<std::size_t>& chosen) {
    ++sets;
    Network net = stored;
    for (const auto& probe : probes) {
      for (std::size_t k = 0; k < retrievers.size(); ++k) {
        const auto r = retrievers[k].retrieve(net, probe, runs);
        ++runs;
        if (!std::includes(r.active_fanals.begin(), r.active_fanals.end(), truth.begin(), truth.end())) {
          if (violations++ == 0) {
            first_violation = "config " + std::to_string(k) + " probe " + to_string(probe) + " set {";
            for (auto i : chosen) first_violation += to_string(others[i]);
            first_violation += "}";
          }
        }
      }
    }
  }

  // Every set holding the target plus `extra` other messages, extra <= depth.
  void exhaustive(const Network& net, std::vector<std::size_t>& chosen, std::size_t start, std::size_t depth) {
    check(net, chosen);
    if (chosen.size() == depth) return;
    for (std::size_t i = start; i < others.size(); ++i) {
      Network next = net;
      next.store(others[i]);
      chosen.push_back(i);
      exhaustive(next, chosen, i + 1, depth);
      chosen.pop_back();
    }
  }

  void sampled(std::size_t extra, std::size_t count, Rng& rng) {
    std::vector<std::size_t> index(others.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
    for (std::size_t s = 0; s < count; ++s) {
      std::vector<std::size_t> chosen;
      std::sample(index.begin(), index.end(), std::back_inserter(chosen), extra, rng);
      Network net(shape);
      net.store(target);
      for (auto i : chosen) net.store(others[i]);
      check(net, chosen);
    }
  }
};

Verdict criterion6() {
  SafetyCheck check;
  Network base(check.shape);
  base.store(check.target);
  std::vector<std::size_t> chosen;
  check.exhaustive(base, chosen, 0, 3);  // M <= 4
  const std::size_t exhaustive_sets = check.sets;
  Rng rng(derive_seed(6, hash_name("safety")));
  check.sampled(4, 200000, rng);  // M = 5
  check.sampled(5, 200000, rng);  // M = 6
  Verdict v;
  v.require(check.violations == 0, fmt("%zu violations, first: %s", check.violations, check.first_violation.c_str()));
  if (v.pass)
    v.detail = fmt("0 violations in %zu runs (%zu sets with M<=4 exhaustive, %zu sampled with M=5,6)", check.runs,
                   exhaustive_sets, check.sets - exhaustive_sets);
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 7: worked examples.

Verdict criterion7() {
  Verdict v;
  const std::vector<double> s1{25, 18, 25, 23, 23, 19, 18, 19, 18, 17};
  const double theta = gwsta_threshold(s1, 7);
  v.require(theta == 18.0, fmt("gwsta threshold %.6g != 18", theta));

  {
    Network net(NetworkShape(10, 1));
    for (std::size_t f = 0; f < 10; ++f) net.set_active(f, true);
    const ScoreMap scores(std::vector<double>{25, 18, 25, 23, 23, 19, 18, 19, 17, 17});
    Rng rng(0);
    const auto step = apply_glsko_phase2(net, scores, {3, std::nullopt}, rng);
    v.require(step.theta && *step.theta == 19.0, "glsko theta != 19");
    std::multiset<double> survivors;
    for (auto f : net.active_fanals()) survivors.insert(scores[f]);
    v.require(survivors == std::multiset<double>{25, 25, 23, 23}, "glsko survivors != {25,25,23,23}");
  }

  {
    const NetworkShape shape(6, 4);
    Network net(shape);
    const FanalId p{1, 1}, q{6, 1}, a{2, 1}, b{3, 1}, c1{4, 1}, c2{4, 2}, c3{4, 3};
    auto link = [&](FanalId x, FanalId y) {
      Message m = Message::zeros(6);
      m.set(x.cluster - 1, static_cast<Message::Segment>(x.index));
      m.set(y.cluster - 1, static_cast<Message::Segment>(y.index));
      net.store(m);
    };
    for (auto x : {a, b, c1}) link(p, x);
    for (auto x : {c1, c2, c3, a}) link(q, x);
    for (auto x : {a, b, c1, c2, c3}) net.set_active(x, true);
    const auto sos = score_sos(net, 0), norm = score_norm(net, 0), som = score_som(net, 0);
    const auto P = shape.flat(p), Q = shape.flat(q);
    v.require(sos[P] == 3 && sos[Q] == 4, fmt("SOS %.6g vs %.6g, want 3 vs 4", sos[P], sos[Q]));
    v.require(norm[P] == 1.0 + 1.0 + 1.0 / 3.0 && norm[Q] == 2,
              fmt("NORM %.17g vs %.17g, want 7/3 vs 2", norm[P], norm[Q]));
    v.require(som[P] == 3 && som[Q] == 2, fmt("SOM %.6g vs %.6g, want 3 vs 2", som[P], som[Q]));
  }
  if (v.pass) v.detail = "theta=18; theta=19 with survivors {25,25,23,23}; scores 3/4, 7/3/2, 3/2";
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 8: per seed, ML errors <= every network config's errors.

ExperimentSpec desk_spec() {
  return parse_spec_file(std::string(GBNN_CONFIG_DIR) + "/desk.cfg");
}

Verdict criterion8() {
  Verdict v;
  ExperimentSpec spec = desk_spec();
  spec.include_oracle = true;
  RunOptions options;
  options.threads = worker_count();
  std::size_t comparisons = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    spec.seed = seed;
    const auto rows = run_experiment(spec, options);
    std::map<std::size_t, std::size_t> ml;
    for (const auto& r : rows)
      if (r.config == kOracleConfigName) ml[r.messages] = r.errors;
    for (const auto& r : rows) {
      if (r.config == kOracleConfigName) continue;
      ++comparisons;
      v.require(ml.at(r.messages) <= r.errors, fmt("seed %llu M=%zu: ML %zu errors > %s %zu",
                                                   static_cast<unsigned long long>(seed), r.messages,
                                                   ml.at(r.messages), r.config.c_str(), r.errors));
    }
  }
  if (v.pass) v.detail = fmt("ML <= network in all %zu (seed, config, M) comparisons", comparisons);
  return v;
}

// ---------------------------------------------------------------------------
// Criterion 9: same seed, different thread counts, identical data columns.

std::string data_columns(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  std::istringstream in(out.str());
  std::string line, kept;
  while (std::getline(in, line)) kept += line.substr(0, line.rfind(',')) + "\n";
  return kept;
}

Verdict criterion9() {
  Verdict v;
  ExperimentSpec desk = desk_spec();
  ExperimentSpec large = parse_spec_file(std::string(GBNN_CONFIG_DIR) + "/figure4.cfg");
  large.message_counts = {50000, 100000};
  large.trials = 200;
  std::size_t checked = 0;
  for (auto* spec : {&desk, &large}) {
    spec->seed = 12345;
    RunOptions one, many;
    many.threads = 4;
    const auto a = data_columns(run_experiment(*spec, one));
    const auto b = data_columns(run_experiment(*spec, many));
    const auto c = data_columns(run_experiment(*spec, many));
    v.require(a == b, "threads=1 and threads=4 differ");
    v.require(b == c, "two threads=4 runs differ");
    ++checked;
  }
  if (v.pass) v.detail = fmt("%zu specs, 1 vs 4 threads, byte-identical data columns", checked);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--only N]...\n", argv[0]);
      return 2;
    }
  }
  auto wanted = [&](int id) { return only.empty() || only.count(id) > 0; };

  Sweep sweep;
  if (wanted(1) || wanted(2) || wanted(3) || wanted(4) || wanted(5)) {
    std::printf("sweep: chi=100 ell=64 c=12 erasures=3 trials=%zu\n", Sweep::kTrials);
    sweep.run();
  }

  const std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
      {1, [&] { return criterion1(sweep); }}, {2, [&] { return criterion2(sweep); }},
      {3, [&] { return criterion3(sweep); }}, {4, [&] { return criterion4(sweep); }},
      {5, [&] { return criterion5(sweep); }}, {6, criterion6},
      {7, criterion7},                         {8, criterion8},
      {9, criterion9},
  };

  std::vector<std::string> lines;
  bool all = true;
  for (const auto& [id, fn] : criteria) {
    if (!wanted(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = fn();
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    all = all && v.pass;
    lines.push_back(fmt("criterion %d: %s  %s", id, v.pass ? "PASS" : "FAIL", v.detail.c_str()));
    std::printf("%s  [%.1f s]\n", lines.back().c_str(), took.count());
    std::fflush(stdout);
  }
  std::printf("\nsummary\n");
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  return all ? 0 : 1;
}
