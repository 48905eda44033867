// bench: runs retrieval experiments described by a spec file and writes CSV.
//
//   bench run <spec.cfg> -o <out.csv> [--seed N] [--threads K] [--strict-clique] [--gnuplot]
//   bench validate <spec.cfg>
//
// Exit codes: 0 success, 2 spec or usage error, 1 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "gbnn/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitSpec = 2;

void print_warnings(const gbnn::ExperimentSpec& spec) {
  for (const auto& w : spec.warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clique-network retrieval benchmark"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::size_t threads = std::max(1U, std::thread::hardware_concurrency());
  bool strict_clique = false;
  bool gnuplot = false;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run an experiment spec and write CSV results");
  run->add_option("spec", spec_path, "Spec file")->required();
  run->add_option("-o,--output", out_path, "Output CSV path")->required();
  run->add_option("--seed", seed, "Override the spec's master seed");
  run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--strict-clique", strict_clique, "CLQ also verifies every pair of active fanals");
  run->add_flag("--gnuplot", gnuplot, "Also write one .dat file per config");
  run->add_flag("-q,--quiet", quiet, "No progress output");

  auto* validate = app.add_subcommand("validate", "Check a spec file and exit");
  validate->add_option("spec", spec_path, "Spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitSpec;
  }

  gbnn::ExperimentSpec spec;
  try {
    spec = gbnn::parse_spec_file(spec_path);
  } catch (const gbnn::SpecError& e) {
    std::cerr << spec_path << ": " << e.what() << '\n';
    return kExitSpec;
  }
  print_warnings(spec);

  if (validate->parsed()) {
    std::cout << spec_path << ": ok (" << spec.configs.size() << " configs, " << spec.message_counts.size()
              << " message counts, " << spec.trials << " trials"
              << (spec.include_oracle ? ", oracle" : "") << ")\n";
    return kExitOk;
  }

  if (seed) spec.seed = *seed;
  try {
    // Fail on an unwritable path before spending time on the run.
    {
      std::ofstream probe(out_path, std::ios::app);
      if (!probe) throw std::runtime_error("cannot open " + out_path + " for writing");
    }
    gbnn::RunOptions options;
    options.threads = threads;
    options.strict_clique = strict_clique;
    if (!quiet) {
      options.on_row = [](const gbnn::ResultRow& r) {
        std::fprintf(stderr, "%-16s M=%-8zu error_rate=%.6f avg_iterations=%.3f (%.0f ms)\n", r.config.c_str(),
                     r.messages, r.error_rate, r.avg_iterations, r.wall_time_ms);
      };
    }
    const auto rows = gbnn::run_experiment(spec, options);
    gbnn::write_csv(rows, out_path);
    if (gnuplot) {
      const auto stem = std::filesystem::path(out_path).replace_extension().string();
      for (const auto& p : gbnn::write_gnuplot(rows, stem))
        if (!quiet) std::cerr << "wrote " << p << '\n';
    }
  } catch (const gbnn::SpecError& e) {
    std::cerr << "spec error: " << e.what() << '\n';
    return kExitSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
