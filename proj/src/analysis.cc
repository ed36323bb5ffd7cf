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

#include "triad/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include "format.h"

namespace triad::analysis {
namespace {

using internal::format_double;

double scaled_weight(std::uint64_t weight, std::uint64_t n, double alpha) {
  return static_cast<double>(weight) /
         std::pow(static_cast<double>(n), alpha);
}

nlohmann::json stats_json(const SampleStats& s) {
  return {{"count", s.count},
          {"mean", s.mean},
          {"variance", s.variance},
          {"std_error", s.std_error}};
}

}  // namespace

SampleStats SampleStats::of(std::span<const double> samples) {
  SampleStats s;
  s.count = samples.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : samples) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(s.count - 1);
    s.std_error = std::sqrt(s.variance / static_cast<double>(s.count));
  }
  return s;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

EmpiricalDistribution ratios(const WeightHistogram& hist) {
  EmpiricalDistribution out;
  if (hist.num_vertices == 0) return out;
  const auto total = static_cast<double>(hist.num_vertices);
  for (const auto& [w, count] : hist.counts) {
    out[w] = static_cast<double>(count) / total;
  }
  return out;
}

double DistributionReport::max_relative_error(std::uint64_t lo,
                                              std::uint64_t hi) const {
  double worst = 0.0;
  for (const WeightComparison& row : rows) {
    if (row.w >= lo && row.w <= hi) worst = std::max(worst, row.relative_error);
  }
  return worst;
}

DistributionReport distribution_error(const EmpiricalDistribution& empirical,
                                      const TheoreticalDistribution& theory,
                                      std::uint64_t w_cut) {
  if (w_cut == 0 || w_cut > theory.w_max()) {
    throw std::invalid_argument("w_cut " + std::to_string(w_cut) +
                                " outside [1, " +
                                std::to_string(theory.w_max()) + "]");
  }
  if (empirical.empty()) throw std::invalid_argument("empty histogram");

  DistributionReport report;
  report.w_cut = w_cut;
  double head_l1 = 0.0;
  double empirical_head = 0.0;
  double empirical_total = 0.0;
  for (const auto& [w, value] : empirical) {
    empirical_total += value;
    if (w >= 1 && w <= w_cut) empirical_head += value;
  }
  for (std::uint64_t w = 1; w <= w_cut; ++w) {
    auto it = empirical.find(w);
    const double e = it == empirical.end() ? 0.0 : it->second;
    const double x = theory.x(w);
    report.rows.push_back(WeightComparison{w, e, x, std::abs(e - x) / x});
    head_l1 += std::abs(e - x);
  }
  const double empirical_tail = empirical_total - empirical_head;
  report.tail_discrepancy = 0.5 * std::abs(empirical_tail - theory.y(w_cut));
  report.total_variation = 0.5 * head_l1 + report.tail_discrepancy;
  return report;
}

DistributionReport distribution_error(const WeightHistogram& hist,
                                      const TheoreticalDistribution& theory,
                                      std::uint64_t w_cut) {
  return distribution_error(ratios(hist), theory, w_cut);
}

std::uint64_t default_w_cut(const TheoreticalDistribution& theory,
                            std::uint64_t num_vertices, double min_expected) {
  std::uint64_t cut = 1;
  const auto v = static_cast<double>(num_vertices);
  for (std::uint64_t w = 1; w <= theory.w_max(); ++w) {
    if (v * theory.x(w) >= min_expected) cut = w;
  }
  return cut;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points,
                          double w_min, double w_max) {
  std::vector<std::pair<double, double>> logs;
  for (const auto& [w, value] : points) {
    if (w < w_min || w > w_max) continue;
    if (!(value > 0.0) || !(w > 0.0)) {
      throw std::invalid_argument("power-law fit needs positive data");
    }
    logs.emplace_back(std::log(w), std::log(value));
  }
  if (logs.size() < 10) {
    throw std::invalid_argument("power-law fit needs at least 10 points, got " +
                                std::to_string(logs.size()));
  }
  const auto m = static_cast<double>(logs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [x, y] : logs) {
    mean_x += x;
    mean_y += y;
  }
  mean_x /= m;
  mean_y /= m;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mean_x) * (x - mean_x);
    sxy += (x - mean_x) * (y - mean_y);
  }
  if (sxx == 0.0) throw std::invalid_argument("power-law fit needs distinct w");

  PowerLawFit fit;
  fit.points = logs.size();
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double rss = 0.0;
  for (const auto& [x, y] : logs) {
    const double r = y - (fit.intercept + fit.slope * x);
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  return fit;
}

VertexTrajectoryReport summarize_vertex(const RunResult& result,
                                        const Coefficients& coeffs,
                                        VertexId label,
                                        std::optional<std::uint64_t> reference_n) {
  auto it = std::find_if(result.tracked.begin(), result.tracked.end(),
                         [label](const TrackedVertex& t) { return t.label == label; });
  if (it == result.tracked.end()) {
    throw std::invalid_argument("vertex " + std::to_string(label) +
                                " is not tracked");
  }
  const TrackedVertex& tracked = *it;
  const bool born = tracked.birth_step.has_value() &&
                    std::any_of(tracked.points.begin(), tracked.points.end(),
                                [](const TrajectoryPoint& p) { return p.weight > 0; });
  if (!born) {
    throw std::invalid_argument("vertex " + std::to_string(label) +
                                " was never born");
  }
  const auto& pts = tracked.points;
  if (pts.size() < 2) {
    throw std::invalid_argument("vertex " + std::to_string(label) +
                                " has fewer than two checkpoints");
  }

  const double alpha = coeffs.alpha;
  VertexTrajectoryReport r;
  r.label = label;
  r.birth_step = *tracked.birth_step;
  const TrajectoryPoint& last = pts.back();
  r.final_n = last.n;

  const std::uint64_t target = reference_n.value_or(last.n / 10);
  const TrajectoryPoint* ref = &pts.front();
  for (const TrajectoryPoint& p : pts) {
    if (p.n <= target && p.n < last.n) ref = &p;
  }
  r.reference_n = ref->n;
  r.reference_scaled_weight = scaled_weight(ref->weight, ref->n, alpha);
  r.final_scaled_weight = scaled_weight(last.weight, last.n, alpha);
  r.stability_ratio = r.final_scaled_weight / r.reference_scaled_weight;
  r.zeta_estimate = b_closed_form(alpha, last.n) *
                    static_cast<double>(last.weight) / std::tgamma(1.0 + alpha);

  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].weight > 1) {
      r.martingale_increments.push_back(pts[i + 1].martingale -
                                        pts[i].martingale);
    }
  }
  r.increment_stats = SampleStats::of(r.martingale_increments);

  if (alpha > 0.0 && alpha < 1.0) {
    for (const TrajectoryPoint& p : pts) {
      if (p.weight <= 1) continue;
      const double v =
          e_closed_form(alpha, p.n) / static_cast<double>(p.weight - 1);
      r.max_inverse_excess = std::max(r.max_inverse_excess.value_or(v), v);
    }
  }
  return r;
}

TrajectoryReport trajectory_summary(const RunResult& result,
                                    const Coefficients& coeffs,
                                    std::optional<std::uint64_t> reference_n) {
  TrajectoryReport report;
  for (const TrackedVertex& t : result.tracked) {
    report.vertices.push_back(
        summarize_vertex(result, coeffs, t.label, reference_n));
  }
  return report;
}

EmpiricalDistribution Aggregate::mean_distribution() const {
  EmpiricalDistribution out;
  for (const auto& [w, s] : weight_ratio) out[w] = s.mean;
  return out;
}

Aggregate merge_results(std::vector<RunResult> results,
                        std::optional<std::uint64_t> reference_n) {
  if (results.empty()) throw std::invalid_argument("nothing to merge");
  std::sort(results.begin(), results.end(),
            [](const RunResult& a, const RunResult& b) {
              return std::tie(a.config.replication_index, a.config.seed) <
                     std::tie(b.config.replication_index, b.config.seed);
            });
  const RunConfig& first = results.front().config;
  for (const RunResult& r : results) {
    if (!(r.config.params == first.params) ||
        r.config.n_steps != first.n_steps) {
      throw std::invalid_argument(
          "cannot merge runs with different params or step counts");
    }
    if (r.checkpoints.empty()) throw std::invalid_argument("run has no checkpoints");
  }

  Aggregate agg;
  agg.params = first.params;
  agg.n_steps = first.n_steps;
  agg.replications = results.size();
  const Coefficients coeffs = coefficients(agg.params);

  std::vector<double> vertex_ratios;
  std::map<std::uint64_t, std::vector<double>> per_weight;
  for (const RunResult& r : results) {
    const Checkpoint& cp = r.final_checkpoint();
    vertex_ratios.push_back(static_cast<double>(cp.histogram.num_vertices) /
                            static_cast<double>(cp.n));
    for (const auto& [w, count] : cp.histogram.counts) per_weight[w];
  }
  for (const RunResult& r : results) {
    const EmpiricalDistribution dist = ratios(r.final_checkpoint().histogram);
    for (auto& [w, values] : per_weight) {
      auto it = dist.find(w);
      values.push_back(it == dist.end() ? 0.0 : it->second);
    }
  }
  agg.vertex_ratio = SampleStats::of(vertex_ratios);
  for (const auto& [w, values] : per_weight) {
    agg.weight_ratio[w] = SampleStats::of(values);
  }

  for (const RunResult& r : results) {
    for (const TrackedVertex& t : r.tracked) {
      PooledTrajectory& pooled = agg.trajectories[t.label];
      VertexTrajectoryReport v;
      try {
        v = summarize_vertex(r, coeffs, t.label, reference_n);
      } catch (const std::invalid_argument&) {
        ++pooled.unborn;
        continue;
      }
      pooled.final_scaled_weights.push_back(v.final_scaled_weight);
      pooled.stability_ratios.push_back(v.stability_ratio);
      pooled.zeta_estimates.push_back(v.zeta_estimate);
      pooled.increments.insert(pooled.increments.end(),
                               v.martingale_increments.begin(),
                               v.martingale_increments.end());
    }
  }
  for (auto& [label, pooled] : agg.trajectories) {
    pooled.increment_stats = SampleStats::of(pooled.increments);
    if (!pooled.stability_ratios.empty()) {
      std::vector<double> deviations;
      for (double s : pooled.stability_ratios) deviations.push_back(std::abs(s - 1.0));
      pooled.median_abs_stability_deviation = median(deviations);
    }
  }
  return agg;
}

nlohmann::json to_json(const DistributionReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const WeightComparison& row : report.rows) {
    rows.push_back({{"w", row.w},
                    {"empirical", row.empirical},
                    {"theory", row.theory},
                    {"rel_error", row.relative_error}});
  }
  return {{"w_cut", report.w_cut},
          {"total_variation", report.total_variation},
          {"tail_discrepancy", report.tail_discrepancy},
          {"rows", rows}};
}

nlohmann::json to_json(const VertexTrajectoryReport& r) {
  nlohmann::json j = {{"label", r.label},
                      {"birth_step", r.birth_step},
                      {"reference_n", r.reference_n},
                      {"final_n", r.final_n},
                      {"reference_scaled_weight", r.reference_scaled_weight},
                      {"final_scaled_weight", r.final_scaled_weight},
                      {"stability_ratio", r.stability_ratio},
                      {"zeta_estimate", r.zeta_estimate},
                      {"martingale_increments", stats_json(r.increment_stats)}};
  j["max_inverse_excess"] = r.max_inverse_excess
                                ? nlohmann::json(*r.max_inverse_excess)
                                : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const Aggregate& agg) {
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [w, s] : agg.weight_ratio) {
    weights[std::to_string(w)] = stats_json(s);
  }
  nlohmann::json trajectories = nlohmann::json::object();
  for (const auto& [label, p] : agg.trajectories) {
    const bool all_positive =
        !p.final_scaled_weights.empty() &&
        std::all_of(p.final_scaled_weights.begin(), p.final_scaled_weights.end(),
                    [](double v) { return v > 0.0; });
    trajectories[std::to_string(label)] = {
        {"born_in", p.final_scaled_weights.size()},
        {"unborn_in", p.unborn},
        {"final_scaled_weights", p.final_scaled_weights},
        {"stability_ratios", p.stability_ratios},
        {"zeta_estimates", p.zeta_estimates},
        {"all_final_scaled_weights_positive", all_positive},
        {"median_abs_stability_deviation", p.median_abs_stability_deviation},
        {"martingale_increments", stats_json(p.increment_stats)}};
  }
  return {{"params", {{"p", agg.params.p}, {"r", agg.params.r}, {"q", agg.params.q}}},
          {"n_steps", agg.n_steps},
          {"replications", agg.replications},
          {"vertex_ratio", stats_json(agg.vertex_ratio)},
          {"weight_ratio", weights},
          {"trajectories", trajectories}};
}

void write_comparison_csv(std::ostream& out, const DistributionReport& report) {
  out << "w,empirical,theory,rel_error\n";
  for (const WeightComparison& row : report.rows) {
    out << row.w << ',' << format_double(row.empirical) << ','
        << format_double(row.theory) << ',' << format_double(row.relative_error)
        << '\n';
  }
}

void write_tail_csv(std::ostream& out, const TheoreticalDistribution& theory,
                    const EmpiricalDistribution& empirical) {
  out << "w,x_w,empirical\n";
  for (std::uint64_t w = 1; w <= theory.w_max(); ++w) {
    out << w << ',' << format_double(theory.x(w)) << ',';
    auto it = empirical.find(w);
    if (it != empirical.end()) out << format_double(it->second);
    out << '\n';
  }
}

}  // namespace triad::analysis
