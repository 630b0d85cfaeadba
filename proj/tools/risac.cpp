// SPDX-License-Identifier: Apache-2.0
//
// risac: RIS-assisted over-the-air computation optimization library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// risac: experiment driver.
//
//   risac run <spec-file> [--seed S] [--trials T] [--out FILE] [--jobs J] [--strict] [--no-timing]
//   risac oracle [--trials T] [--seed S] [--phase-grid G] [--beam-samples B] [--out FILE] [--strict]
//   risac timing [--axis K|N|M] [--values 64,128,256] [--fixed F] [--iterations I] [--out FILE]
//   risac solve <scenario-file> [--seed S] [--log FILE] [--trace FILE]

#include "risac/risac.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace {

using namespace risac;

// Opens `path` for writing, or returns stdout when it is empty.
class OutputSink {
 public:
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int cmd_run(const std::string& spec_path, std::optional<std::uint64_t> seed, std::optional<int> trials,
            std::optional<std::string> out, std::optional<int> jobs, bool strict, bool no_timing) {
  ExperimentSpec spec = load_experiment_spec(spec_path);
  if (seed) spec.seed_base = *seed;
  if (trials) spec.trials = *trials;
  if (out) spec.out = *out;
  if (jobs) spec.jobs = *jobs;
  if (no_timing) spec.record_timing = false;
  const ResultTable table = run_experiment(spec);
  OutputSink sink(spec.out);
  table.write_csv(sink.stream());
  for (const SummaryRow& s : table.summary)
    std::fprintf(stderr, "%-13s %s=%-5d mean mse %.6g (%.2f dB)  feasible %d/%d\n",
                 std::string(method_name(s.method)).c_str(), std::string(axis_name(table.axis)).c_str(),
                 s.sweep_value, s.mean_mse, 10.0 * std::log10(s.mean_mse), s.feasible,
                 s.feasible + s.infeasible);
  if (strict && table.any_infeasible()) {
    std::fprintf(stderr, "error: infeasible rows present\n");
    return 3;
  }
  return 0;
}

// Random tiny scenarios (N <= 3, M <= 2, K <= 3): altermin against brute force.
int cmd_oracle(int trials, std::uint64_t seed, const BruteForceOptions& bf, const std::string& out,
               double tolerance, bool strict) {
  OutputSink sink(out);
  std::ostream& os = sink.stream();
  os << "trial,seed,K,M,N,altermin_mse,brute_force_mse,rel_diff,within_tolerance\n";
  int failures = 0;
  const CounterRng sizes(seed);
  for (int t = 0; t < trials; ++t) {
    const PhiloxBlock b = sizes.split(0x53495A45ull).block_at(t, 0);  // "SIZE"
    SystemConfig cfg;
    cfg.N = 1 + static_cast<int>(b[0] % kBruteForceMaxN);
    cfg.M = 1 + static_cast<int>(b[1] % kBruteForceMaxM);
    cfg.K = 1 + static_cast<int>(b[2] % kBruteForceMaxK);
    const std::uint64_t s = seed + static_cast<std::uint64_t>(t);
    const ChannelRealization ch = generate_scenario(cfg, s);
    const LinkBudget budget{cfg.power, cfg.sigma2};
    const double am = altermin(ch, budget, AlterMinSettings{}, s).mse;
    const double bm = brute_force_small(ch, budget, bf).mse;
    const double rel = std::abs(am - bm) / bm;
    const bool ok = rel <= tolerance;
    failures += ok ? 0 : 1;
    char line[256];
    std::snprintf(line, sizeof line, "%d,%llu,%d,%d,%d,%.10g,%.10g,%.6g,%d\n", t,
                  static_cast<unsigned long long>(s), cfg.K, cfg.M, cfg.N, am, bm, rel, ok ? 1 : 0);
    os << line;
  }
  std::fprintf(stderr, "%d/%d scenarios within %.3g relative of brute force\n", trials - failures, trials,
               tolerance);
  return strict && failures > 0 ? 4 : 0;
}

int cmd_timing(const TimingSpec& spec, const std::string& out) {
  const TimingResult r = timing_sweep(spec);
  OutputSink sink(out);
  r.write_csv(sink.stream());
  std::fprintf(stderr, "log-log slope vs %s: %.3f\n", std::string(axis_name(spec.axis)).c_str(), r.slope);
  return 0;
}

int cmd_solve(const std::string& path, std::optional<std::uint64_t> seed, const std::string& log_path) {
  const Scenario sc = load_scenario(path);
  const std::uint64_t s = seed.value_or(sc.seed);
  const ChannelRealization ch = generate_scenario(sc.config, s);
  const AlterMinResult r = altermin(ch, {sc.config.power, sc.config.sigma2}, AlterMinSettings{}, s);
  OutputSink sink(log_path);
  r.log.write_csv(sink.stream());
  std::fprintf(stderr,
               "outer iterations %d (%s)\ninitial mse %.6g\nmse before projection %.6g\nmse %.6g (%.2f dB)\n",
               r.outer_iterations, r.converged ? "converged" : "cap reached", r.mse_initial, r.mse_relaxed,
               r.mse, mse_db(r.mse));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted over-the-air computation: MSE minimization experiments"};
  app.require_subcommand(1);

  std::string spec_path, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials, jobs;
  bool strict = false, no_timing = false;
  auto* run = app.add_subcommand("run", "Run an experiment spec and write the result CSV");
  run->add_option("spec", spec_path, "Experiment spec file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Base seed (overrides the spec)");
  run->add_option("--trials", trials, "Trials per sweep point (overrides the spec)");
  run->add_option("--out", out, "Output CSV (default: spec 'out', else stdout)");
  run->add_option("--jobs", jobs, "Worker threads");
  run->add_flag("--strict", strict, "Exit nonzero if any row is infeasible");
  run->add_flag("--no-timing", no_timing, "Write time_ms = 0 (byte-reproducible output)");

  int oracle_trials = 20;
  std::uint64_t oracle_seed = 1;
  double tolerance = 0.05;
  BruteForceOptions bf;
  auto* oracle = app.add_subcommand("oracle", "Compare AlterMin against brute force on tiny scenarios");
  oracle->add_option("--trials", oracle_trials, "Number of scenarios")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", oracle_seed, "Base seed");
  oracle->add_option("--phase-grid", bf.phase_grid, "Phase grid points per element")->check(CLI::PositiveNumber);
  oracle->add_option("--beam-samples", bf.beam_samples, "Beamformer samples (M = 2)")->check(CLI::PositiveNumber);
  oracle->add_option("--tolerance", tolerance, "Relative MSE tolerance");
  oracle->add_option("--out", out, "Output CSV (default stdout)");
  oracle->add_flag("--strict", strict, "Exit nonzero if any scenario is outside the tolerance");

  TimingSpec timing_spec;
  std::string axis = "K";
  auto* timing = app.add_subcommand("timing", "Per-iteration cost of the saddle solver");
  timing->add_option("--axis", axis, "Swept size: K, N or M")->check(CLI::IsMember({"K", "N", "M"}));
  timing->add_option("--values", timing_spec.values, "Sizes to sweep")->delimiter(',');
  timing->add_option("--fixed", timing_spec.fixed, "Size of the other dimension")->check(CLI::PositiveNumber);
  timing->add_option("--iterations", timing_spec.iterations, "Iterations per measurement")
      ->check(CLI::PositiveNumber);
  timing->add_option("--repeats", timing_spec.repeats, "Repeats (median)")->check(CLI::PositiveNumber);
  timing->add_option("--out", out, "Output CSV (default stdout)");

  std::string scenario_path, log_path;
  auto* solve = app.add_subcommand("solve", "Run AlterMin on one scenario and print its convergence log");
  solve->add_option("scenario", scenario_path, "Scenario config file")->required()->check(CLI::ExistingFile);
  solve->add_option("--seed", seed, "Seed (overrides the scenario)");
  solve->add_option("--log", log_path, "Convergence log CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(spec_path, seed, trials, out.empty() ? std::nullopt : std::optional(out), jobs,
                             strict, no_timing);
    if (*oracle) return cmd_oracle(oracle_trials, oracle_seed, bf, out, tolerance, strict);
    if (*timing) {
      timing_spec.axis = parse_axis(axis);
      return cmd_timing(timing_spec, out);
    }
    if (*solve) return cmd_solve(scenario_path, seed, log_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
