// Copyright 2026 The Triad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "triad/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "triad/analysis.h"
#include "triad/engine.h"
#include "triad/errors.h"
#include "triad/graph.h"
#include "triad/oracle.h"
#include "triad/run_io.h"
#include "triad/theory.h"

namespace triad::cli {
namespace {

namespace fs = std::filesystem;

constexpr double kChiSquareSignificance = 1e-3;

struct ParamFlags {
  double p = 1.0;
  double r = 1.0;
  double q = 0.0;

  Params params() const { return Params{p, r, q}; }
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags) {
  cmd->add_option("--p", flags.p, "probability of adding a new vertex, in (0,1]")
      ->capture_default_str();
  cmd->add_option("--r", flags.r,
                  "preferential probability at new-vertex steps, in [0,1]")
      ->capture_default_str();
  cmd->add_option("--q", flags.q,
                  "preferential probability at old-triple steps, in [0,1]")
      ->capture_default_str();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::vector<VertexId> parse_labels(const std::string& text) {
  std::vector<VertexId> labels;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::size_t used = 0;
    unsigned long value = 0;
    try {
      value = std::stoul(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || token[0] == '-') {
      throw std::invalid_argument("bad vertex label '" + token + "'");
    }
    labels.push_back(static_cast<VertexId>(value));
  }
  return labels;
}

unsigned thread_budget() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TRIAD_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      threads = std::min(threads, static_cast<unsigned>(cap));
    }
  }
  return threads;
}

nlohmann::json asymptotics_json(const Params& params, const Coefficients& c,
                                const TailAsymptotics& tail) {
  return {{"params", {{"p", params.p}, {"r", params.r}, {"q", params.q}}},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"exponent", tail.exponent},
          {"tail_constant", tail.constant}};
}

// --- theory -----------------------------------------------------------------

struct TheoryOptions {
  ParamFlags params;
  std::uint64_t w_max = 20;
  std::string out_dir;
};

int run_theory(const TheoryOptions& opt, std::ostream& out) {
  const Params params = opt.params.params();
  const Coefficients c = coefficients(params);
  const TheoreticalDistribution dist = xw_recursion(c, opt.w_max);
  const TailAsymptotics tail = tail_asymptotics(c);

  out << "alpha=" << c.alpha << " beta=" << c.beta << '\n';
  out << "exponent=" << tail.exponent << " tail_constant=" << tail.constant
      << '\n';
  write_distribution_csv(out, dist);

  if (!opt.out_dir.empty()) {
    const fs::path dir(opt.out_dir);
    make_dir(dir);
    auto csv = open_out(dir / "xw.csv");
    write_distribution_csv(csv, dist);
    auto json = open_out(dir / "asymptotics.json");
    json << asymptotics_json(params, c, tail).dump(2) << '\n';
    if (!csv || !json) throw IoError("failed writing theory output");
  }
  return kOk;
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
  ParamFlags params;
  std::uint64_t steps = 0;
  std::uint64_t seed = 1;
  std::uint64_t reps = 1;
  std::string track = "0";
  std::string checkpoints = "pow2";
  std::string out_dir;
  bool snapshot = false;
};

int run_simulate(const SimulateOptions& opt, std::ostream& out) {
  RunConfig base;
  base.params = opt.params.params();
  validate(base.params);
  base.n_steps = opt.steps;
  base.seed = opt.seed;
  base.tracked = parse_labels(opt.track);
  base.checkpoints = CheckpointSchedule::parse(opt.checkpoints);
  if (base.n_steps < 1) throw std::invalid_argument("--steps must be >= 1");
  if (opt.reps < 1) throw std::invalid_argument("--reps must be >= 1");

  const fs::path root(opt.out_dir);
  make_dir(root);

  std::vector<RunResult> results;
  if (opt.snapshot) {
    for (std::uint64_t rep = 0; rep < opt.reps; ++rep) {
      RunConfig config = base;
      config.replication_index = rep;
      GraphState final_state = GraphState::initial();
      results.push_back(run_simulation(config, &final_state));
      write_snapshot(final_state,
                     root / ("run-" + std::to_string(rep)) / "snapshot");
    }
  } else {
    results = run_replications(base, opt.reps, thread_budget());
  }

  for (const RunResult& r : results) {
    const fs::path dir = root / ("run-" + std::to_string(r.config.replication_index));
    write_run(r, dir);
    out << "run-" << r.config.replication_index << ": n=" << r.config.n_steps
        << " V=" << r.final_vertices << " edges=" << r.final_edges
        << " triangles=" << r.final_triangles << " wall=" << r.wall_seconds
        << "s\n";
  }
  return kOk;
}

// --- verify -----------------------------------------------------------------

struct VerifyOptions {
  ParamFlags params;
  bool custom_params = false;
  std::uint64_t draws = 100000;
  std::uint64_t seed = 1;
  std::string out_dir;
};

int run_verify(const VerifyOptions& opt, std::ostream& out) {
  std::vector<Params> param_sets =
      opt.custom_params ? std::vector<Params>{opt.params.params()}
                        : oracle::reference_params();
  for (const Params& p : param_sets) validate(p);
  const std::vector<GraphState> states = oracle::reference_states();

  if (!opt.out_dir.empty()) make_dir(opt.out_dir);

  bool all_ok = true;
  nlohmann::json report = nlohmann::json::array();
  Rng rng = make_stream(opt.seed, 0);
  for (std::size_t pi = 0; pi < param_sets.size(); ++pi) {
    const Params& params = param_sets[pi];
    for (std::size_t si = 0; si < states.size(); ++si) {
      const GraphState& state = states[si];
      const oracle::ExactStepDistribution dist =
          oracle::enumerate_step(state, params);
      const bool sums_to_one = dist.total() == 1;

      std::size_t identity_failures = 0;
      for (VertexId v = 0; v < state.num_vertices(); ++v) {
        if (oracle::participation_probability(state, params, v) !=
            oracle::predicted_participation(state, params, v)) {
          ++identity_failures;
        }
      }
      const oracle::ChiSquareResult chi =
          oracle::engine_agreement(state, params, opt.draws, rng);
      const bool ok = sums_to_one && identity_failures == 0 &&
                      chi.passes(kChiSquareSignificance);
      all_ok = all_ok && ok;

      out << (ok ? "PASS" : "FAIL") << " params=(" << params.p << ','
          << params.r << ',' << params.q << ") state=" << si
          << " V=" << state.num_vertices() << " n=" << state.steps()
          << " outcomes=" << dist.outcomes.size()
          << " sum=1:" << (sums_to_one ? "yes" : "no")
          << " identity_failures=" << identity_failures
          << " chi2=" << chi.statistic << " dof=" << chi.degrees_of_freedom
          << " p=" << chi.p_value << '\n';

      report.push_back({{"params", {{"p", params.p}, {"r", params.r}, {"q", params.q}}},
                        {"state_index", si},
                        {"fingerprint", dist.fingerprint},
                        {"outcomes", dist.outcomes.size()},
                        {"sums_to_one", sums_to_one},
                        {"identity_failures", identity_failures},
                        {"chi_square", {{"statistic", chi.statistic},
                                        {"dof", chi.degrees_of_freedom},
                                        {"p_value", chi.p_value},
                                        {"draws", chi.draws},
                                        {"impossible_draws", chi.impossible_draws}}},
                        {"pass", ok}});
      if (!opt.out_dir.empty()) {
        auto csv = open_out(fs::path(opt.out_dir) /
                            ("oracle-p" + std::to_string(pi) + "-s" +
                             std::to_string(si) + ".csv"));
        oracle::write_distribution_csv(csv, dist);
      }
    }
  }
  if (!opt.out_dir.empty()) {
    auto json = open_out(fs::path(opt.out_dir) / "verify.json");
    json << nlohmann::json{{"significance", kChiSquareSignificance},
                           {"draws", opt.draws},
                           {"seed", opt.seed},
                           {"pass", all_ok},
                           {"checks", report}}
                .dump(2)
         << '\n';
  }
  out << (all_ok ? "verification passed" : "verification FAILED") << '\n';
  return all_ok ? kOk : kVerificationFailure;
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeOptions {
  std::string out_dir;
  std::uint64_t w_cut = 0;  // 0: default
  std::uint64_t reference_n = 0;  // 0: default
};

int run_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  const fs::path root(opt.out_dir);
  if (!fs::is_directory(root)) throw IoError("no such directory " + root.string());
  const auto dirs = find_run_dirs(root);
  if (dirs.empty()) throw IoError("no run-* directories under " + root.string());

  std::vector<RunResult> runs;
  for (const fs::path& dir : dirs) runs.push_back(read_run(dir));
  const analysis::Aggregate agg = analysis::merge_results(
      std::move(runs),
      opt.reference_n ? std::optional<std::uint64_t>(opt.reference_n) : std::nullopt);

  const Coefficients c = coefficients(agg.params);
  const analysis::EmpiricalDistribution mean_dist = agg.mean_distribution();
  const std::uint64_t max_seen = mean_dist.empty() ? 1 : mean_dist.rbegin()->first;
  const std::uint64_t w_max = std::max<std::uint64_t>({10000, max_seen, opt.w_cut});
  const TheoreticalDistribution theory = xw_recursion(c, w_max);

  const double mean_vertices =
      agg.vertex_ratio.mean * static_cast<double>(agg.n_steps);
  const std::uint64_t w_cut =
      opt.w_cut ? opt.w_cut
                : analysis::default_w_cut(theory,
                                          static_cast<std::uint64_t>(mean_vertices));
  const analysis::DistributionReport dist =
      analysis::distribution_error(mean_dist, theory, w_cut);

  nlohmann::json report = analysis::to_json(agg);
  report["alpha"] = c.alpha;
  report["beta"] = c.beta;
  report["distribution"] = analysis::to_json(dist);

  std::vector<std::pair<double, double>> theory_points;
  for (std::uint64_t w = 1; w <= theory.w_max(); ++w) {
    theory_points.emplace_back(static_cast<double>(w), theory.x(w));
  }
  const analysis::PowerLawFit theory_fit =
      analysis::fit_power_law(theory_points, 100, 10000);
  report["tail_fit"]["expected_slope"] = -theory.exponent();
  report["tail_fit"]["theory"] = {{"w_min", 100},
                                  {"w_max", 10000},
                                  {"slope", theory_fit.slope},
                                  {"residual", theory_fit.residual}};
  // Empirical fit over the band with expected count >= 20 and w >= 2.
  const std::uint64_t band_hi = analysis::default_w_cut(
      theory, static_cast<std::uint64_t>(mean_vertices),
      analysis::kMinExpectedCountTail);
  std::vector<std::pair<double, double>> empirical_points;
  for (const auto& [w, value] : mean_dist) {
    if (w >= 2 && w <= band_hi && value > 0.0) {
      empirical_points.emplace_back(static_cast<double>(w), value);
    }
  }
  try {
    const analysis::PowerLawFit fit = analysis::fit_power_law(
        empirical_points, 2, static_cast<double>(band_hi));
    report["tail_fit"]["empirical"] = {{"w_min", 2},
                                       {"w_max", band_hi},
                                       {"slope", fit.slope},
                                       {"residual", fit.residual},
                                       {"points", fit.points}};
  } catch (const std::invalid_argument& e) {
    report["tail_fit"]["empirical"] = {{"error", e.what()}};
  }

  const std::uint64_t head = std::min<std::uint64_t>(5, w_cut);
  nlohmann::json checks;
  checks["note"] = "tolerances are acceptance choices of this tool";
  checks["distribution_max_rel_error_w1_to_5"] = {
      {"value", dist.max_relative_error(1, head)},
      {"tolerance", analysis::kDistributionRelativeTolerance},
      {"pass", dist.max_relative_error(1, head) <=
                   analysis::kDistributionRelativeTolerance}};
  for (const auto& [label, pooled] : agg.trajectories) {
    const double band = analysis::kMartingaleSigmas * pooled.increment_stats.std_error;
    const std::string key = "vertex_" + std::to_string(label);
    checks[key]["stability"] = {
        {"median_abs_deviation", pooled.median_abs_stability_deviation},
        {"tolerance", analysis::kStabilityTolerance},
        {"pass", !pooled.stability_ratios.empty() &&
                     pooled.median_abs_stability_deviation <=
                         analysis::kStabilityTolerance}};
    checks[key]["martingale"] = {
        {"mean_increment", pooled.increment_stats.mean},
        {"band", band},
        {"sigmas", analysis::kMartingaleSigmas},
        {"pass", pooled.increment_stats.count > 1 &&
                     std::abs(pooled.increment_stats.mean) <= band}};
  }
  report["checks"] = checks;

  {
    auto json = open_out(root / "report.json");
    json << report.dump(2) << '\n';
    auto csv = open_out(root / "distribution.csv");
    analysis::write_comparison_csv(csv, dist);
    auto tail = open_out(root / "tail.csv");
    analysis::write_tail_csv(tail, theory, mean_dist);
    if (!json || !csv || !tail) throw IoError("failed writing analysis output");
  }

  out << "replications=" << agg.replications << " n=" << agg.n_steps
      << " mean V/n=" << agg.vertex_ratio.mean << '\n';
  out << "w_cut=" << w_cut << " TV=" << dist.total_variation
      << " max rel error (w<=" << head << ")=" << dist.max_relative_error(1, head)
      << '\n';
  out << "wrote " << (root / "report.json").string() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Simulate and check the triadic-interaction random graph model"};
  app.require_subcommand(1);

  TheoryOptions theory_opt;
  auto* theory = app.add_subcommand(
      "theory", "limit weight distribution x_w and its tail asymptotics");
  add_param_flags(theory, theory_opt.params);
  theory->add_option("--wmax", theory_opt.w_max, "largest weight tabulated")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  theory->add_option("--out", theory_opt.out_dir,
                     "directory for xw.csv and asymptotics.json");

  SimulateOptions sim_opt;
  auto* simulate = app.add_subcommand("simulate", "run replications of the model");
  add_param_flags(simulate, sim_opt.params);
  simulate->add_option("--steps", sim_opt.steps, "steps per replication")
      ->required();
  simulate->add_option("--seed", sim_opt.seed, "base seed")->capture_default_str();
  simulate->add_option("--reps", sim_opt.reps, "number of replications")
      ->capture_default_str();
  simulate->add_option("--track", sim_opt.track,
                       "comma-separated vertex labels to follow")
      ->capture_default_str();
  simulate->add_option("--checkpoints", sim_opt.checkpoints,
                       "pow2, pow10 and/or explicit steps, comma-separated")
      ->capture_default_str();
  simulate->add_option("--out", sim_opt.out_dir, "output directory")->required();
  simulate->add_flag("--snapshot", sim_opt.snapshot,
                     "also export the final graph of each replication");
  simulate->footer("TRIAD_THREADS caps the number of parallel replications.");

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand(
      "verify", "exact single-step checks and engine goodness of fit");
  auto* vp = verify->add_option("--p", verify_opt.params.p, "probability of a new vertex");
  auto* vr = verify->add_option("--r", verify_opt.params.r, "new-vertex preferential probability");
  auto* vq = verify->add_option("--q", verify_opt.params.q, "old-triple preferential probability");
  verify->add_option("--draws", verify_opt.draws, "engine draws per state")
      ->capture_default_str();
  verify->add_option("--seed", verify_opt.seed, "seed for engine draws")
      ->capture_default_str();
  verify->add_option("--out", verify_opt.out_dir,
                     "directory for verify.json and oracle CSV dumps");
  verify->footer("Without --p/--r/--q a built-in set of parameter triples is checked.");

  AnalyzeOptions analyze_opt;
  auto* analyze = app.add_subcommand("analyze", "compare stored runs with theory");
  analyze->add_option("--out", analyze_opt.out_dir,
                      "directory holding run-* subdirectories")
      ->required();
  analyze->add_option("--wcut", analyze_opt.w_cut,
                      "largest weight compared (default: expected count >= 50)");
  analyze->add_option("--reference", analyze_opt.reference_n,
                      "earlier checkpoint for the stability ratio "
                      "(default: largest <= n/10)");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*theory) return run_theory(theory_opt, out);
    if (*simulate) return run_simulate(sim_opt, out);
    if (*verify) {
      verify_opt.custom_params = vp->count() + vr->count() + vq->count() > 0;
      return run_verify(verify_opt, out);
    }
    if (*analyze) return run_analyze(analyze_opt, out);
  } catch (const ParamsError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace triad::cli
