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

#include "triad/engine.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace triad {
namespace {

constexpr std::uint64_t kGammaRefreshInterval = std::uint64_t{1} << 16;

std::uint64_t uniform_index(Rng& rng, std::uint64_t size) {
  return boost::random::uniform_int_distribution<std::uint64_t>(0, size - 1)(
      rng);
}

double uniform_unit(Rng& rng) { return boost::random::uniform_01<double>()(rng); }

// Two distinct labels from [0, n), every unordered pair equally likely.
std::array<VertexId, 2> sample_pair(Rng& rng, std::uint64_t n) {
  auto first = static_cast<VertexId>(uniform_index(rng, n));
  auto second = static_cast<VertexId>(uniform_index(rng, n - 1));
  if (second >= first) ++second;
  return {first, second};
}

// Three distinct labels from [0, n), every unordered triple equally likely.
std::array<VertexId, 3> sample_triple(Rng& rng, std::uint64_t n) {
  auto [x, y] = sample_pair(rng, n);
  const VertexId lo = std::min(x, y);
  const VertexId hi = std::max(x, y);
  auto z = static_cast<VertexId>(uniform_index(rng, n - 2));
  if (z >= lo) ++z;
  if (z >= hi) ++z;
  return {x, y, z};
}

void require_vertex(const GraphState& state, VertexId v) {
  if (v >= state.num_vertices()) {
    throw std::invalid_argument("interaction names unknown vertex " +
                                std::to_string(v));
  }
}

}  // namespace

std::string_view branch_name(Branch branch) {
  switch (branch) {
    case Branch::kNewVertexPreferential:
      return "new_vertex_preferential";
    case Branch::kNewVertexUniform:
      return "new_vertex_uniform";
    case Branch::kOldPreferential:
      return "old_preferential";
    case Branch::kOldUniform:
      return "old_uniform";
  }
  return "unknown";
}

Branch parse_branch(std::string_view name) {
  for (Branch b : {Branch::kNewVertexPreferential, Branch::kNewVertexUniform,
                   Branch::kOldPreferential, Branch::kOldUniform}) {
    if (branch_name(b) == name) return b;
  }
  throw std::invalid_argument("unknown branch '" + std::string(name) + "'");
}

InteractionChoice InteractionChoice::new_vertex(Branch branch, VertexId x,
                                                VertexId y) {
  if (!adds_vertex(branch)) {
    throw std::invalid_argument("branch does not add a vertex");
  }
  const EdgeKey key = make_edge_key(x, y);
  return InteractionChoice{branch, {key.u, key.v, 0}};
}

InteractionChoice InteractionChoice::old_triple(Branch branch, VertexId x,
                                                VertexId y, VertexId z) {
  if (adds_vertex(branch)) {
    throw std::invalid_argument("branch adds a vertex");
  }
  const TriangleKey key = make_triangle_key(x, y, z);
  return InteractionChoice{branch, {key.a, key.b, key.c}};
}

std::string to_string(const InteractionChoice& choice) {
  std::ostringstream out;
  out << branch_name(choice.branch) << '(';
  const auto ps = choice.participants();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out << ' ';
    out << ps[i];
  }
  out << ')';
  return out.str();
}

Rng make_stream(std::uint64_t seed, std::uint64_t replication_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication_index),
                    static_cast<std::uint32_t>(replication_index >> 32)};
  return Rng(seq);
}

InteractionChoice choose_interaction(const GraphState& state,
                                     const Params& params, Rng& rng) {
  const bool new_vertex = uniform_unit(rng) < params.p;
  const bool preferential =
      uniform_unit(rng) < (new_vertex ? params.r : params.q);
  const std::uint64_t num_vertices = state.num_vertices();

  if (new_vertex && preferential) {
    const auto tokens = state.edge_tokens();
    const EdgeKey key = state.edges()[tokens[uniform_index(rng, tokens.size())]].key;
    return InteractionChoice{Branch::kNewVertexPreferential, {key.u, key.v, 0}};
  }
  if (new_vertex) {
    auto [x, y] = sample_pair(rng, num_vertices);
    return InteractionChoice::new_vertex(Branch::kNewVertexUniform, x, y);
  }
  if (preferential) {
    const auto tokens = state.triangle_tokens();
    const TriangleKey key =
        state.triangles()[tokens[uniform_index(rng, tokens.size())]].key;
    return InteractionChoice{Branch::kOldPreferential, {key.a, key.b, key.c}};
  }
  auto [x, y, z] = sample_triple(rng, num_vertices);
  return InteractionChoice::old_triple(Branch::kOldUniform, x, y, z);
}

StepDelta apply_interaction(GraphState& state, const InteractionChoice& choice) {
  const auto& v = choice.old_vertices;
  StepDelta delta;
  if (adds_vertex(choice.branch)) {
    if (!(v[0] < v[1]) || v[2] != 0) {
      throw std::invalid_argument("malformed choice " + to_string(choice));
    }
    require_vertex(state, v[1]);
    if (choice.branch == Branch::kNewVertexPreferential &&
        !state.has_edge(v[0], v[1])) {
      throw std::invalid_argument("preferential pair is not an edge: " +
                                  to_string(choice));
    }
    const VertexId fresh = state.add_vertex();
    delta.new_vertex = fresh;
    delta.participants = {v[0], v[1], fresh};
    delta.edges_created += state.bump_edge(v[0], v[1]) ? 1 : 0;
    delta.edges_created += state.bump_edge(v[0], fresh) ? 1 : 0;
    delta.edges_created += state.bump_edge(v[1], fresh) ? 1 : 0;
    delta.triangle_created = state.bump_triangle(v[0], v[1], fresh);
  } else {
    if (!(v[0] < v[1] && v[1] < v[2])) {
      throw std::invalid_argument("malformed choice " + to_string(choice));
    }
    require_vertex(state, v[2]);
    if (choice.branch == Branch::kOldPreferential &&
        state.triangle_weight(v[0], v[1], v[2]) == 0) {
      throw std::invalid_argument("preferential triple is not a stored "
                                  "triangle: " + to_string(choice));
    }
    delta.participants = v;
    delta.edges_created += state.bump_edge(v[0], v[1]) ? 1 : 0;
    delta.edges_created += state.bump_edge(v[0], v[2]) ? 1 : 0;
    delta.edges_created += state.bump_edge(v[1], v[2]) ? 1 : 0;
    delta.triangle_created = state.bump_triangle(v[0], v[1], v[2]);
  }
  state.advance_step();
  return delta;
}

CheckpointSchedule CheckpointSchedule::parse(std::string_view text) {
  CheckpointSchedule s;
  s.powers_of_two = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string token(text.substr(start, end - start));
    if (token == "pow2") {
      s.powers_of_two = true;
    } else if (token == "pow10") {
      s.powers_of_ten = true;
    } else {
      std::size_t used = 0;
      unsigned long long value = 0;
      try {
        value = std::stoull(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || token.empty() || token[0] == '-' ||
          value == 0) {
        throw std::invalid_argument("bad checkpoint token '" + token +
                                    "' (expected pow2, pow10 or a positive "
                                    "integer)");
      }
      s.extra.push_back(value);
    }
    start = end + 1;
  }
  std::sort(s.extra.begin(), s.extra.end());
  s.extra.erase(std::unique(s.extra.begin(), s.extra.end()), s.extra.end());
  return s;
}

std::string CheckpointSchedule::to_string() const {
  std::vector<std::string> parts;
  if (powers_of_two) parts.emplace_back("pow2");
  if (powers_of_ten) parts.emplace_back("pow10");
  for (std::uint64_t e : extra) parts.push_back(std::to_string(e));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::vector<std::uint64_t> CheckpointSchedule::points(
    std::uint64_t n_steps) const {
  std::vector<std::uint64_t> pts;
  if (powers_of_two) {
    for (std::uint64_t n = 1; n <= n_steps; n *= 2) {
      pts.push_back(n);
      if (n > n_steps / 2) break;
    }
  }
  if (powers_of_ten) {
    for (std::uint64_t n = 1; n <= n_steps; n *= 10) {
      pts.push_back(n);
      if (n > n_steps / 10) break;
    }
  }
  for (std::uint64_t n : extra) {
    if (n <= n_steps) pts.push_back(n);
  }
  pts.push_back(n_steps);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool same_outcome(const RunResult& a, const RunResult& b) {
  return a.config == b.config && a.version == b.version &&
         a.checkpoints == b.checkpoints && a.tracked == b.tracked &&
         a.final_vertices == b.final_vertices &&
         a.final_edges == b.final_edges &&
         a.final_triangles == b.final_triangles && a.final_b == b.final_b &&
         a.final_d == b.final_d;
}

Simulation::Simulation(const RunConfig& config)
    : config_(config),
      coeffs_(coefficients(config.params)),
      state_(GraphState::initial()),
      rng_(make_stream(config.seed, config.replication_index)) {}

StepDelta Simulation::step() {
  const auto prior_vertices = static_cast<double>(state_.num_vertices());
  const InteractionChoice choice =
      choose_interaction(state_, config_.params, rng_);
  const StepDelta delta = apply_interaction(state_, choice);

  const std::uint64_t n = state_.steps();
  if (state_.total_triangle_weight() != n + 1 ||
      state_.total_edge_weight() != 3 * (n + 1)) {
    throw std::logic_error("weight totals drifted at step " +
                           std::to_string(n));
  }

  if (n % kGammaRefreshInterval == 0) {
    b_ = b_closed_form(coeffs_.alpha, n);
  } else {
    const auto nd = static_cast<double>(n);
    b_ *= nd / (nd + coeffs_.alpha);
  }
  d_ += coeffs_.beta * config_.params.p * b_ / prior_vertices;
  return delta;
}

double Simulation::martingale(VertexId v) const {
  const std::uint64_t w = v < state_.num_vertices() ? state_.vertex_weight(v) : 0;
  return b_ * static_cast<double>(w) - d_;
}

RunResult run_simulation(const RunConfig& config, GraphState* final_state) {
  if (config.n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  Simulation sim(config);
  RunResult result;
  result.config = config;
  result.version = std::string(kVersion);
  for (VertexId label : config.tracked) {
    result.tracked.push_back(TrackedVertex{label, std::nullopt, {}});
  }

  const std::vector<std::uint64_t> checkpoints =
      config.checkpoints.points(config.n_steps);
  std::size_t next = 0;
  for (std::uint64_t n = 1; n <= config.n_steps; ++n) {
    sim.step();
    if (n != checkpoints[next]) continue;
    ++next;

    const GraphState& state = sim.state();
    if (config.audit_checkpoints) {
      const auto violations = verify_invariants(state);
      if (!violations.empty()) {
        throw std::logic_error("invariant violated at step " +
                               std::to_string(n) + ": " + violations.front());
      }
    }
    result.checkpoints.push_back(Checkpoint{n, weight_histogram(state)});
    for (TrackedVertex& t : result.tracked) {
      if (t.label >= state.num_vertices()) continue;
      t.birth_step = state.birth_step(t.label);
      t.points.push_back(TrajectoryPoint{n, state.vertex_weight(t.label),
                                         sim.martingale(t.label)});
    }
  }

  const GraphState& state = sim.state();
  result.final_vertices = state.num_vertices();
  result.final_edges = state.edges().size();
  result.final_triangles = state.triangles().size();
  result.final_b = sim.b();
  result.final_d = sim.d();
  if (final_state != nullptr) *final_state = std::move(sim).release_state();
  result.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return result;
}

std::vector<RunResult> run_replications(const RunConfig& base,
                                        std::uint64_t count,
                                        unsigned max_threads) {
  std::vector<RunResult> results(count);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto worker = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      RunConfig config = base;
      config.replication_index = base.replication_index + i;
      try {
        results[i] = run_simulation(config);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const auto threads = static_cast<unsigned>(std::clamp<std::uint64_t>(
      count, 1, std::max(1u, max_threads)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace triad
