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

#ifndef TRIAD_ENGINE_H_
#define TRIAD_ENGINE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triad/graph.h"
#include "triad/theory.h"

namespace triad {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Branch : std::uint8_t {
  kNewVertexPreferential,
  kNewVertexUniform,
  kOldPreferential,
  kOldUniform,
};

std::string_view branch_name(Branch branch);
// Inverse of branch_name; throws std::invalid_argument.
Branch parse_branch(std::string_view name);

constexpr bool adds_vertex(Branch branch) {
  return branch == Branch::kNewVertexPreferential ||
         branch == Branch::kNewVertexUniform;
}

// The resolved randomness of one step. `old_vertices` is sorted ascending;
// only the first old_count() entries are meaningful (the remaining slot is
// zero). For new-vertex branches the new vertex is implicitly labelled
// num_vertices() of the state the choice is applied to.
struct InteractionChoice {
  Branch branch = Branch::kNewVertexUniform;
  std::array<VertexId, 3> old_vertices{};

  std::size_t old_count() const { return adds_vertex(branch) ? 2 : 3; }
  std::span<const VertexId> participants() const {
    return {old_vertices.data(), old_count()};
  }

  static InteractionChoice new_vertex(Branch branch, VertexId x, VertexId y);
  static InteractionChoice old_triple(Branch branch, VertexId x, VertexId y,
                                      VertexId z);

  friend bool operator==(const InteractionChoice&,
                         const InteractionChoice&) = default;
  friend auto operator<=>(const InteractionChoice&,
                          const InteractionChoice&) = default;
};

std::string to_string(const InteractionChoice& choice);

struct StepDelta {
  // All three interacting vertices, new vertex included.
  std::array<VertexId, 3> participants{};
  std::optional<VertexId> new_vertex;
  int edges_created = 0;
  bool triangle_created = false;
};

using Rng = std::mt19937_64;

// Independent, reproducible stream for replication `replication_index` of a
// run seeded with `seed`.
Rng make_stream(std::uint64_t seed, std::uint64_t replication_index);

// Draws the choice for the next step (step state.steps() + 1): one uniform
// for new-vs-old, one for preferential-vs-uniform, then the selection.
InteractionChoice choose_interaction(const GraphState& state,
                                     const Params& params, Rng& rng);

// Throws std::invalid_argument if the choice is not valid for `state`.
StepDelta apply_interaction(GraphState& state, const InteractionChoice& choice);

// Geometric checkpoint grid plus explicit extra points. The final step is
// always a checkpoint.
struct CheckpointSchedule {
  bool powers_of_two = true;
  bool powers_of_ten = false;
  std::vector<std::uint64_t> extra;

  // Comma-separated tokens: "pow2", "pow10", or positive integers.
  static CheckpointSchedule parse(std::string_view text);
  std::string to_string() const;
  // Sorted, unique, all in [1, n_steps], last == n_steps.
  std::vector<std::uint64_t> points(std::uint64_t n_steps) const;

  friend bool operator==(const CheckpointSchedule&,
                         const CheckpointSchedule&) = default;
};

struct RunConfig {
  Params params;
  std::uint64_t n_steps = 1;
  std::uint64_t seed = 0;
  std::uint64_t replication_index = 0;
  std::vector<VertexId> tracked = {0};
  CheckpointSchedule checkpoints;
  // Run the full verify_invariants() audit at every checkpoint.
  bool audit_checkpoints = true;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct Checkpoint {
  std::uint64_t n = 0;
  WeightHistogram histogram;  // histogram.num_vertices == V_n

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

// W[n, j] and Z[n, j] = b_n W[n, j] - d_n at one checkpoint.
struct TrajectoryPoint {
  std::uint64_t n = 0;
  std::uint64_t weight = 0;
  double martingale = 0.0;

  friend bool operator==(const TrajectoryPoint&,
                         const TrajectoryPoint&) = default;
};

// Points are recorded only at checkpoints where the vertex exists; a vertex
// that is never born has no birth step and no points.
struct TrackedVertex {
  VertexId label = 0;
  std::optional<std::uint64_t> birth_step;
  std::vector<TrajectoryPoint> points;

  friend bool operator==(const TrackedVertex&, const TrackedVertex&) = default;
};

struct RunResult {
  RunConfig config;
  std::string version;
  std::vector<Checkpoint> checkpoints;
  std::vector<TrackedVertex> tracked;
  std::uint64_t final_vertices = 0;
  std::uint64_t final_edges = 0;      // distinct edges
  std::uint64_t final_triangles = 0;  // stored (positive-weight) triangles
  double final_b = 0.0;
  double final_d = 0.0;
  // Not serialized; everything else is a pure function of `config`.
  double wall_seconds = 0.0;

  const Checkpoint& final_checkpoint() const { return checkpoints.back(); }
};

// Same outcome in every field except wall time.
bool same_outcome(const RunResult& a, const RunResult& b);

// Step-by-step driver. Maintains b_n by recurrence (refreshed from the
// Gamma form every 2^16 steps) and d_n = beta p sum_{i<=n} b_i / V_{i-1}.
class Simulation {
 public:
  explicit Simulation(const RunConfig& config);

  // Executes one step. Throws std::logic_error if the running weight totals
  // drift from n + 1 and 3(n + 1).
  StepDelta step();

  const GraphState& state() const { return state_; }
  GraphState release_state() && { return std::move(state_); }
  const Coefficients& coeffs() const { return coeffs_; }
  double b() const { return b_; }
  double d() const { return d_; }
  // b_n W[n, v] - d_n; W is 0 for a vertex not yet born.
  double martingale(VertexId v) const;

 private:
  RunConfig config_;
  Coefficients coeffs_;
  GraphState state_;
  Rng rng_;
  double b_ = 1.0;
  double d_ = 0.0;
};

RunResult run_simulation(const RunConfig& config,
                         GraphState* final_state = nullptr);

// Runs replications base.replication_index, ..., + count - 1 on up to
// `max_threads` workers. Results are ordered by replication index.
std::vector<RunResult> run_replications(const RunConfig& base,
                                        std::uint64_t count,
                                        unsigned max_threads);

}  // namespace triad

#endif  // TRIAD_ENGINE_H_
