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

#ifndef TRIAD_ANALYSIS_H_
#define TRIAD_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "triad/engine.h"
#include "triad/graph.h"
#include "triad/theory.h"

namespace triad::analysis {

// Acceptance thresholds used by reports. These are choices of this tool,
// not values derived from the model.
inline constexpr double kDistributionRelativeTolerance = 0.05;
inline constexpr double kStabilityTolerance = 0.15;
inline constexpr double kMartingaleSigmas = 4.0;
inline constexpr double kMinExpectedCount = 50.0;
inline constexpr double kMinExpectedCountTail = 20.0;

struct SampleStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased; 0 for fewer than two samples
  double std_error = 0.0;

  static SampleStats of(std::span<const double> samples);
};

double median(std::vector<double> values);

// Fraction of vertices per weight, X[n, w] / V_n.
using EmpiricalDistribution = std::map<std::uint64_t, double>;
EmpiricalDistribution ratios(const WeightHistogram& hist);

struct WeightComparison {
  std::uint64_t w = 0;
  double empirical = 0.0;
  double theory = 0.0;
  double relative_error = 0.0;  // |empirical - theory| / theory
};

struct DistributionReport {
  std::uint64_t w_cut = 0;
  std::vector<WeightComparison> rows;  // w = 1..w_cut
  // (1/2) |empirical mass above w_cut - y_{w_cut}|
  double tail_discrepancy = 0.0;
  // (1/2) sum_{w <= w_cut} |empirical - x_w| + tail_discrepancy
  double total_variation = 0.0;

  // Largest relative error over w in [lo, hi].
  double max_relative_error(std::uint64_t lo, std::uint64_t hi) const;
};

// Weights missing from `empirical` count as 0. Throws std::invalid_argument
// if w_cut is 0 or exceeds theory.w_max(), or if `empirical` is empty.
DistributionReport distribution_error(const EmpiricalDistribution& empirical,
                                      const TheoreticalDistribution& theory,
                                      std::uint64_t w_cut);
DistributionReport distribution_error(const WeightHistogram& hist,
                                      const TheoreticalDistribution& theory,
                                      std::uint64_t w_cut);

// Largest w with num_vertices * x_w >= min_expected (at least 1).
std::uint64_t default_w_cut(const TheoreticalDistribution& theory,
                            std::uint64_t num_vertices,
                            double min_expected = kMinExpectedCount);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-space residuals
  std::size_t points = 0;
};

// Least squares on (log w, log value) over points with w in [w_min, w_max].
// Throws std::invalid_argument on fewer than 10 such points or any
// nonpositive value among them.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points,
                          double w_min, double w_max);

struct VertexTrajectoryReport {
  VertexId label = 0;
  std::uint64_t birth_step = 0;
  std::uint64_t reference_n = 0;
  std::uint64_t final_n = 0;
  double reference_scaled_weight = 0.0;  // W / n^alpha
  double final_scaled_weight = 0.0;
  double stability_ratio = 0.0;  // final / reference scaled weight
  double zeta_estimate = 0.0;    // b_n W / Gamma(1 + alpha)
  // Z[n', j] - Z[n, j] between consecutive checkpoints with W[n, j] > 1.
  std::vector<double> martingale_increments;
  SampleStats increment_stats;
  // sup of e_n / (W - 1) over checkpoints with W > 1; nullopt if none.
  std::optional<double> max_inverse_excess;
};

// Default reference checkpoint: the largest one at or below final_n / 10
// where the vertex exists, else its first checkpoint.
// Throws std::invalid_argument if the vertex was never born or has fewer than
// two checkpoints.
VertexTrajectoryReport summarize_vertex(
    const RunResult& result, const Coefficients& coeffs, VertexId label,
    std::optional<std::uint64_t> reference_n = std::nullopt);

struct TrajectoryReport {
  std::vector<VertexTrajectoryReport> vertices;
};

// Every tracked vertex; same errors as summarize_vertex.
TrajectoryReport trajectory_summary(
    const RunResult& result, const Coefficients& coeffs,
    std::optional<std::uint64_t> reference_n = std::nullopt);

struct PooledTrajectory {
  std::size_t unborn = 0;
  std::vector<double> final_scaled_weights;
  std::vector<double> stability_ratios;
  std::vector<double> zeta_estimates;
  std::vector<double> increments;
  SampleStats increment_stats;
  double median_abs_stability_deviation = 0.0;  // median |ratio - 1|
};

struct Aggregate {
  Params params;
  std::uint64_t n_steps = 0;
  std::size_t replications = 0;
  SampleStats vertex_ratio;                         // V_n / n at the end
  std::map<std::uint64_t, SampleStats> weight_ratio;  // X[n, w] / V_n at the end
  std::map<VertexId, PooledTrajectory> trajectories;

  EmpiricalDistribution mean_distribution() const;
};

// Order independent: results are sorted by (replication_index, seed) before
// accumulation. Throws std::invalid_argument on an empty list or on
// mismatched params / n_steps.
Aggregate merge_results(std::vector<RunResult> results,
                        std::optional<std::uint64_t> reference_n = std::nullopt);

nlohmann::json to_json(const DistributionReport& report);
nlohmann::json to_json(const VertexTrajectoryReport& report);
nlohmann::json to_json(const Aggregate& aggregate);

// "w,empirical,theory,rel_error"
void write_comparison_csv(std::ostream& out, const DistributionReport& report);
// "w,x_w,empirical" over 1..theory.w_max(); empirical blank when absent.
void write_tail_csv(std::ostream& out, const TheoreticalDistribution& theory,
                    const EmpiricalDistribution& empirical);

}  // namespace triad::analysis

#endif  // TRIAD_ANALYSIS_H_
