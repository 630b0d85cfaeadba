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

#ifndef RISAC_EXPERIMENT_HPP
#define RISAC_EXPERIMENT_HPP

#include "risac/aircomp.hpp"
#include "risac/altermin.hpp"
#include "risac/channel.hpp"
#include "risac/config.hpp"
#include "risac/rng.hpp"
#include "risac/saddle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

namespace risac {

enum class Method { Proposed, RandomPhase, NoRis, BruteForce };
enum class SweepAxis { None, M, N, K };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::Proposed: return "proposed";
    case Method::RandomPhase: return "random_phase";
    case Method::NoRis: return "no_ris";
    case Method::BruteForce: return "brute_force";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::Proposed, Method::RandomPhase, Method::NoRis, Method::BruteForce})
    if (method_name(m) == s) return m;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

inline std::string_view axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::M: return "M";
    case SweepAxis::N: return "N";
    case SweepAxis::K: return "K";
  }
  return "?";
}

inline SweepAxis parse_axis(std::string_view s) {
  if (s == "none" || s.empty()) return SweepAxis::None;
  if (s == "M" || s == "m") return SweepAxis::M;
  if (s == "N" || s == "n") return SweepAxis::N;
  if (s == "K" || s == "k") return SweepAxis::K;
  throw ConfigError("unknown sweep axis '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Baselines

struct MethodResult {
  Beamformer m;
  PhaseShiftVector v;
  double mse = 0.0;
  int outer_iterations = 0;
  bool converged = true;
};

/// max_k ||h_k(v)||, the normalization used when only m is optimized.
inline double composite_scale(const ChannelRealization& ch, const PhaseShiftVector& v) {
  return composite_channels(ch, v).colwise().norm().maxCoeff();
}

namespace detail {
inline MethodResult beamformer_only(const ChannelRealization& ch, const LinkBudget& budget,
                                    const AlterMinSettings& settings, const PhaseShiftVector& v,
                                    std::uint64_t seed) {
  settings.validate();
  const double s = composite_scale(ch, v);
  if (!(s > 0.0) || !std::isfinite(s)) throw InfeasibleChannel("all composite channels are zero");
  const ChannelRealization nch = scaled(ch, s);
  ScaResult info;
  MethodResult r;
  r.v = v;
  r.m = optimize_beamformer(nch, v, initial_beamformer(nch, v, settings.init, seed), settings, &info);
  r.mse = mse(r.m, v, ch, budget.power, budget.sigma2);
  r.outer_iterations = info.iterations;
  r.converged = info.converged;
  return r;
}
}  // namespace detail

/// Phase vector drawn from `seed` (on a stream distinct from the altermin
/// initialization) and kept fixed; only m is optimized.
inline MethodResult random_phase_baseline(const ChannelRealization& ch, const LinkBudget& budget,
                                          const AlterMinSettings& settings, std::uint64_t seed) {
  const std::uint64_t phase_seed = CounterRng(seed).split(0x524E44ull).seed();  // "RND"
  return detail::beamformer_only(ch, budget, settings, random_phases(ch.N(), phase_seed), seed);
}

/// Direct links only (Theta = 0); only m is optimized.
inline MethodResult no_ris_baseline(const ChannelRealization& ch, const LinkBudget& budget,
                                    const AlterMinSettings& settings, std::uint64_t seed = 0) {
  return detail::beamformer_only(ch, budget, settings, PhaseShiftVector::Zero(ch.N()), seed);
}

inline MethodResult proposed_method(const ChannelRealization& ch, const LinkBudget& budget,
                                    const AlterMinSettings& settings, std::uint64_t seed) {
  const AlterMinResult a = altermin(ch, budget, settings, seed);
  return {a.m, a.v, a.mse, a.outer_iterations, a.converged};
}

// ---------------------------------------------------------------------------
// Brute-force oracle for tiny instances

struct BruteForceOptions {
  int phase_grid = 36;      // points per RIS element on [0, 2 pi)
  int beam_samples = 4096;  // unit-sphere samples of m when M = 2
};

inline constexpr int kBruteForceMaxN = 3;
inline constexpr int kBruteForceMaxM = 2;
inline constexpr int kBruteForceMaxK = 3;

/// Exhaustive search: every phase vector on the grid, and for each the best
/// unit-norm m among a fixed sample set (M = 2: m = (cos a, e^{j phi} sin a)
/// on a regular (a, phi) grid; M = 1: m = 1, which is exact). Returns the
/// grid optimum.
inline MethodResult brute_force_small(const ChannelRealization& ch, const LinkBudget& budget,
                                      const BruteForceOptions& opts) {
  const Eigen::Index K = ch.K(), M = ch.M(), N = ch.N();
  if (N > kBruteForceMaxN || M > kBruteForceMaxM || K > kBruteForceMaxK)
    throw std::invalid_argument("brute_force_small: instance exceeds the size cap (N<=3, M<=2, K<=3)");
  if (opts.phase_grid < 1 || opts.beam_samples < 1)
    throw std::invalid_argument("brute_force_small: grid sizes must be positive");

  std::vector<VecC> beams;
  if (M == 1) {
    beams.push_back(VecC::Ones(1));
  } else {
    const int na = std::max(2, static_cast<int>(std::sqrt(opts.beam_samples / 2.0)));
    const int nphi = std::max(1, opts.beam_samples / na);
    for (int i = 0; i < na; ++i) {
      const double a = 0.5 * std::numbers::pi * i / (na - 1);
      for (int j = 0; j < nphi; ++j) {
        VecC m(2);
        m << std::cos(a), std::polar(std::sin(a), 2.0 * std::numbers::pi * j / nphi);
        beams.push_back(m);
        if (i == 0) break;  // a = 0: phi is irrelevant
      }
    }
  }

  std::vector<Complex> phases(opts.phase_grid);
  for (int i = 0; i < opts.phase_grid; ++i)
    phases[i] = std::polar(1.0, 2.0 * std::numbers::pi * i / opts.phase_grid);

  // B_k = G diag(h_{r,k}) so h_k(v) = h_{d,k} + B_k v.
  std::vector<MatC> B(K);
  for (Eigen::Index k = 0; k < K; ++k) B[k] = ch.G * ch.h_reflect.col(k).asDiagonal();

  MethodResult best;
  double best_gain = -1.0;
  std::vector<int> idx(N, 0);
  VecC v(N);
  MatC H(M, K);
  while (true) {
    for (Eigen::Index i = 0; i < N; ++i) v(i) = phases[idx[i]];
    for (Eigen::Index k = 0; k < K; ++k) H.col(k) = ch.h_direct.col(k) + B[k] * v;
    for (const VecC& m : beams) {
      double g = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < K && g > best_gain; ++k) g = std::min(g, std::norm(m.dot(H.col(k))));
      if (g > best_gain) {
        best_gain = g;
        best.m = m;
        best.v = v;
      }
    }
    Eigen::Index i = 0;
    while (i < N && ++idx[i] == opts.phase_grid) idx[i++] = 0;
    if (i == N) break;
  }
  best.mse = mse(best.m, best.v, ch, budget.power, budget.sigma2);
  return best;
}

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentSpec {
  SystemConfig base;
  SweepAxis axis = SweepAxis::None;
  std::vector<int> values;
  int trials = 100;
  std::vector<Method> methods{Method::Proposed, Method::RandomPhase, Method::NoRis};
  std::uint64_t seed_base = 1;
  std::string out;
  AlterMinSettings settings;
  BruteForceOptions brute_force;
  bool record_timing = true;  // false writes time_ms = 0 for byte-stable output
  int jobs = 1;

  void validate() const {
    base.validate();
    settings.validate();
    if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
    if (methods.empty()) throw std::invalid_argument("ExperimentSpec: no methods");
    if (jobs < 1) throw std::invalid_argument("ExperimentSpec: jobs must be >= 1");
    if (axis != SweepAxis::None) {
      if (values.empty()) throw std::invalid_argument("ExperimentSpec: sweep without values");
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 1) throw std::invalid_argument("ExperimentSpec: sweep values must be positive");
        if (i > 0 && values[i] <= values[i - 1])
          throw std::invalid_argument("ExperimentSpec: sweep values must be increasing");
      }
    }
    if (std::find(methods.begin(), methods.end(), Method::BruteForce) != methods.end()) {
      for (const int v : sweep_points()) {
        const SystemConfig c = config_at(v);
        if (c.N > kBruteForceMaxN || c.M > kBruteForceMaxM || c.K > kBruteForceMaxK)
          throw std::invalid_argument("ExperimentSpec: brute_force requested above the size cap");
      }
    }
  }

  /// Sweep values, or the single point {0} for an empty sweep.
  std::vector<int> sweep_points() const {
    return axis == SweepAxis::None ? std::vector<int>{0} : values;
  }

  SystemConfig config_at(int value) const {
    SystemConfig c = base;
    if (axis == SweepAxis::M) c.M = value;
    if (axis == SweepAxis::N) c.N = value;
    if (axis == SweepAxis::K) c.K = value;
    return c;
  }

  /// Trial seeds are shared across sweep points and methods (paired draws).
  std::uint64_t trial_seed(int trial) const { return seed_base + static_cast<std::uint64_t>(trial); }
};

struct ResultRow {
  Method method = Method::Proposed;
  int sweep_value = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;  // +inf when infeasible
  double time_ms = 0.0;
  int outer_iters = 0;
  bool converged = false;
  bool feasible = true;

  double mse_db() const { return feasible ? mse_db_of(mse) : std::numeric_limits<double>::infinity(); }
  static double mse_db_of(double linear) { return 10.0 * std::log10(linear); }
};

struct SummaryRow {
  Method method = Method::Proposed;
  int sweep_value = 0;
  double mean_mse = 0.0;
  double mean_time_ms = 0.0;
  int feasible = 0;
  int infeasible = 0;
};

struct ResultTable {
  SweepAxis axis = SweepAxis::None;
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;

  bool any_infeasible() const {
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.feasible; });
  }

  const SummaryRow& mean_of(Method m, int sweep_value) const {
    for (const SummaryRow& s : summary)
      if (s.method == m && s.sweep_value == sweep_value) return s;
    throw std::out_of_range("ResultTable: no summary for that method/point");
  }

  static constexpr const char* kHeader =
      "kind,method,sweep_axis,sweep_value,trial,seed,mse,mse_db,time_ms,outer_iters,converged,feasible";

  /// Per-trial rows followed by one `mean` row per (method, sweep value).
  void write_csv(std::ostream& os) const {
    char buf[64];
    auto num = [&buf](double x) -> const char* {
      if (std::isinf(x)) return "inf";
      std::snprintf(buf, sizeof buf, "%.10g", x);
      return buf;
    };
    os << kHeader << '\n';
    for (const ResultRow& r : rows) {
      os << "trial," << method_name(r.method) << ',' << axis_name(axis) << ',' << r.sweep_value << ','
         << r.trial << ',' << r.seed << ',' << num(r.mse) << ',';
      os << num(r.mse_db()) << ',';
      os << num(r.time_ms) << ',' << r.outer_iters << ',' << (r.converged ? 1 : 0) << ','
         << (r.feasible ? 1 : 0) << '\n';
    }
    for (const SummaryRow& s : summary) {
      os << "mean," << method_name(s.method) << ',' << axis_name(axis) << ',' << s.sweep_value << ','
         << s.feasible + s.infeasible << ",," << num(s.mean_mse) << ',';
      os << num(ResultRow::mse_db_of(s.mean_mse)) << ',';
      os << num(s.mean_time_ms) << ",,," << s.feasible << '\n';
    }
  }
};

/// Runs one method on one realization, timing it and flagging infeasibility.
inline ResultRow run_method(Method method, const ChannelRealization& ch, const LinkBudget& budget,
                            const ExperimentSpec& spec, std::uint64_t seed) {
  ResultRow row;
  row.method = method;
  row.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    MethodResult r;
    switch (method) {
      case Method::Proposed: r = proposed_method(ch, budget, spec.settings, seed); break;
      case Method::RandomPhase: r = random_phase_baseline(ch, budget, spec.settings, seed); break;
      case Method::NoRis: r = no_ris_baseline(ch, budget, spec.settings, seed); break;
      case Method::BruteForce: r = brute_force_small(ch, budget, spec.brute_force); break;
    }
    row.mse = r.mse;
    row.outer_iters = r.outer_iterations;
    row.converged = r.converged;
  } catch (const InfeasibleChannel&) {
    row.feasible = false;
    row.mse = std::numeric_limits<double>::infinity();
  }
  if (spec.record_timing)
    row.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

/// Every (sweep value, trial) draws one realization and runs every method on
/// it. Trials run on `spec.jobs` threads; rows are sorted by (method, sweep
/// value, seed) so the table does not depend on scheduling.
inline ResultTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  struct Task {
    int sweep_value;
    int trial;
  };
  std::vector<Task> tasks;
  for (const int v : spec.sweep_points())
    for (int t = 0; t < spec.trials; ++t) tasks.push_back({v, t});

  std::vector<std::vector<ResultRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      const SystemConfig cfg = spec.config_at(task.sweep_value);
      const std::uint64_t seed = spec.trial_seed(task.trial);
      const ChannelRealization ch = generate_scenario(cfg, seed);
      const LinkBudget budget{cfg.power, cfg.sigma2};
      for (const Method m : spec.methods) {
        ResultRow row = run_method(m, ch, budget, spec, seed);
        row.sweep_value = task.sweep_value;
        row.trial = task.trial;
        results[i].push_back(row);
      }
    }
  };
  const int jobs = std::min<int>(spec.jobs, static_cast<int>(tasks.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  ResultTable table;
  table.axis = spec.axis;
  for (auto& r : results) table.rows.insert(table.rows.end(), r.begin(), r.end());
  auto method_rank = [&spec](Method m) {
    return std::find(spec.methods.begin(), spec.methods.end(), m) - spec.methods.begin();
  };
  std::sort(table.rows.begin(), table.rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    return std::make_tuple(method_rank(a.method), a.sweep_value, a.seed) <
           std::make_tuple(method_rank(b.method), b.sweep_value, b.seed);
  });

  for (const Method m : spec.methods) {
    for (const int v : spec.sweep_points()) {
      SummaryRow s;
      s.method = m;
      s.sweep_value = v;
      double sum = 0.0, time = 0.0;
      for (const ResultRow& r : table.rows) {
        if (r.method != m || r.sweep_value != v) continue;
        time += r.time_ms;
        if (r.feasible) {
          sum += r.mse;
          ++s.feasible;
        } else {
          ++s.infeasible;
        }
      }
      s.mean_mse = s.feasible > 0 ? sum / s.feasible : std::numeric_limits<double>::infinity();
      s.mean_time_ms = time / std::max(1, s.feasible + s.infeasible);
      table.summary.push_back(s);
    }
  }
  return table;
}

/// Experiment keys on top of the scenario keys: sweep, values, trials,
/// methods, seed, out, phase_grid, beam_samples, eps, eps_outer, eps_inner,
/// eps_saddle, max_outer, max_inner, max_saddle_iter, init, record_timing, jobs.
inline ExperimentSpec experiment_spec_from(const KeyValues& kv) {
  ExperimentSpec spec;
  spec.base = system_config_from(kv);
  spec.axis = parse_axis(kv.get_string("sweep", "none"));
  for (const double v : kv.get_list("values")) {
    if (v != std::floor(v)) throw ConfigError("sweep values must be integers");
    spec.values.push_back(static_cast<int>(v));
  }
  spec.trials = static_cast<int>(kv.get_int("trials", spec.trials));
  if (kv.has("methods")) {
    spec.methods.clear();
    std::string s = kv.get_string("methods", "");
    for (char& c : s)
      if (c == ',') c = ' ';
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) spec.methods.push_back(parse_method(tok));
  }
  spec.seed_base = static_cast<std::uint64_t>(kv.get_int("seed", 1));
  spec.out = kv.get_string("out", "");
  spec.brute_force.phase_grid = static_cast<int>(kv.get_int("phase_grid", spec.brute_force.phase_grid));
  spec.brute_force.beam_samples = static_cast<int>(kv.get_int("beam_samples", spec.brute_force.beam_samples));
  AlterMinSettings& st = spec.settings;
  const double eps = kv.get_double("eps", 1e-5);
  st.eps_outer = kv.get_double("eps_outer", eps);
  st.eps_inner = kv.get_double("eps_inner", eps);
  st.eps_saddle = kv.get_double("eps_saddle", eps);
  st.max_outer = static_cast<int>(kv.get_int("max_outer", st.max_outer));
  st.max_inner = static_cast<int>(kv.get_int("max_inner", st.max_inner));
  st.max_saddle_iter = static_cast<int>(kv.get_int("max_saddle_iter", st.max_saddle_iter));
  const std::string init = kv.get_string("init", "matched_filter");
  if (init == "matched_filter") st.init = InitKind::MatchedFilter;
  else if (init == "random") st.init = InitKind::Random;
  else throw ConfigError("unknown init '" + init + "'");
  spec.record_timing = kv.get_bool("record_timing", spec.record_timing);
  spec.jobs = static_cast<int>(kv.get_int("jobs", spec.jobs));
  kv.require_all_used();
  spec.validate();
  return spec;
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
  return experiment_spec_from(KeyValues::load(path));
}

// ---------------------------------------------------------------------------
// Per-iteration cost of the saddle solver

struct TimingSpec {
  SweepAxis axis = SweepAxis::K;  // K, N (disk domain, D = 2N) or M (ball, D = 2M)
  std::vector<int> values{64, 128, 256};
  int fixed = 64;                 // the other size (N or M when sweeping K; K otherwise)
  int iterations = 2000;
  int repeats = 5;
  std::uint64_t seed = 1;
};

struct TimingRow {
  int K = 0;
  int D = 0;
  double per_iter_us = 0.0;  // median over repeats
};

struct TimingResult {
  std::vector<TimingRow> rows;
  double slope = 0.0;  // least-squares slope of log(time) vs log(swept size)

  void write_csv(std::ostream& os) const {
    os << "K,D,per_iter_us\n";
    char buf[64];
    for (const TimingRow& r : rows) {
      std::snprintf(buf, sizeof buf, "%.6g", r.per_iter_us);
      os << r.K << ',' << r.D << ',' << buf << '\n';
    }
  }
};

/// Random saddle instance with K rows over the disk (N) or ball (M) domain.
inline SurrogateData random_surrogate(int K, int half_dim, DomainKind domain, std::uint64_t seed) {
  const CounterRng rng(seed);
  SurrogateData s;
  s.domain = domain;
  s.P.resize(K, 2 * half_dim);
  s.q.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int d = 0; d < 2 * half_dim; ++d) s.P(k, d) = rng.complex_gaussian_at(k, d).real();
    s.q(k) = rng.complex_gaussian_at(k, 1u << 30).real();
  }
  return s;
}

/// Median wall time per Mirror-Prox iteration at a fixed iteration count.
inline double time_saddle_iteration(const SurrogateData& data, int iterations, int repeats) {
  std::vector<double> samples;
  SaddleOptions opts;
  opts.eps = -1.0;  // run exactly `iterations` steps
  opts.max_iter = iterations;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const SaddleResult res = solve_saddle(data, warm_start(data, VecR::Zero(data.D())), opts);
    const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    samples.push_back(us / std::max(1, res.iterations));
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  return samples[samples.size() / 2];
}

inline TimingResult timing_sweep(const TimingSpec& spec) {
  if (spec.axis == SweepAxis::None) throw std::invalid_argument("timing_sweep: axis must be K, N or M");
  if (spec.values.empty() || spec.iterations < 1 || spec.repeats < 1 || spec.fixed < 1)
    throw std::invalid_argument("timing_sweep: invalid spec");
  TimingResult out;
  std::vector<double> lx, ly;
  for (const int v : spec.values) {
    const int K = spec.axis == SweepAxis::K ? v : spec.fixed;
    const int half = spec.axis == SweepAxis::K ? spec.fixed : v;
    const DomainKind dom = spec.axis == SweepAxis::M ? DomainKind::UnitBall : DomainKind::DiskProduct;
    const SurrogateData data = random_surrogate(K, half, dom, spec.seed);
    TimingRow row{K, 2 * half, time_saddle_iteration(data, spec.iterations, spec.repeats)};
    out.rows.push_back(row);
    lx.push_back(std::log(static_cast<double>(v)));
    ly.push_back(std::log(row.per_iter_us));
  }
  if (lx.size() >= 2) {
    const double n = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return out;
}

}  // namespace risac

#endif  // RISAC_EXPERIMENT_HPP
