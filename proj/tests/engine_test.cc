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

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "triad/oracle.h"

namespace triad {
namespace {

RunConfig make_config(Params params, std::uint64_t steps, std::uint64_t seed) {
  RunConfig c;
  c.params = params;
  c.n_steps = steps;
  c.seed = seed;
  return c;
}

// Four vertices: initial triangle plus vertex 3 attached to the pair (0, 1).
GraphState four_vertex_state() {
  GraphState g = GraphState::initial();
  apply_interaction(g, InteractionChoice::new_vertex(Branch::kNewVertexUniform, 0, 1));
  return g;
}

TEST(ChooseInteraction, UniformPairsOnInitialState) {
  const GraphState g = GraphState::initial();
  Rng rng = make_stream(11, 0);
  std::map<InteractionChoice, int> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    const InteractionChoice c = choose_interaction(g, {1.0, 0.0, 0.0}, rng);
    ASSERT_EQ(c.branch, Branch::kNewVertexUniform);
    ++counts[c];
  }
  ASSERT_EQ(counts.size(), 3u);
  const double sd = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (const auto& [choice, count] : counts) {
    EXPECT_NEAR(count, draws / 3.0, 4 * sd) << to_string(choice);
  }
}

TEST(ChooseInteraction, PreferentialEdgesOnInitialState) {
  const GraphState g = GraphState::initial();
  Rng rng = make_stream(12, 0);
  std::map<InteractionChoice, int> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) {
    const InteractionChoice c = choose_interaction(g, {1.0, 1.0, 0.0}, rng);
    ASSERT_EQ(c.branch, Branch::kNewVertexPreferential);
    ++counts[c];
  }
  ASSERT_EQ(counts.size(), 3u);
  const double sd = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (const auto& [choice, count] : counts) {
    EXPECT_NEAR(count, draws / 3.0, 4 * sd);
  }
}

TEST(ChooseInteraction, BranchFrequencies) {
  const GraphState g = GraphState::initial();
  const Params params{0.5, 0.0, 1.0};
  Rng rng = make_stream(13, 0);
  const int draws = 100000;
  int new_uniform = 0;
  for (int i = 0; i < draws; ++i) {
    const InteractionChoice c = choose_interaction(g, params, rng);
    if (c.branch == Branch::kNewVertexUniform) {
      ++new_uniform;
    } else {
      ASSERT_EQ(c.branch, Branch::kOldPreferential);
      ASSERT_EQ(c, InteractionChoice::old_triple(Branch::kOldPreferential, 0, 1, 2));
    }
  }
  const double sd = std::sqrt(draws * 0.25);
  EXPECT_NEAR(new_uniform, draws * 0.5, 3 * sd);

  Rng chi_rng = make_stream(14, 0);
  EXPECT_TRUE(oracle::engine_agreement(g, params, draws, chi_rng).passes(1e-3));
}

TEST(ChooseInteraction, ParticipationRateMatchesFormula) {
  // Frozen state with six vertices of unequal weight.
  const GraphState g = oracle::reference_states().back();
  for (const Params& params : oracle::reference_params()) {
    const Coefficients c = coefficients(params);
    const double n = static_cast<double>(g.steps() + 1);
    const double v_prev = static_cast<double>(g.num_vertices());
    Rng rng = make_stream(15, 0);
    const int draws = 100000;
    std::vector<int> hits(g.num_vertices(), 0);
    for (int i = 0; i < draws; ++i) {
      const InteractionChoice choice = choose_interaction(g, params, rng);
      for (VertexId v : choice.participants()) ++hits[v];
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      const double expected =
          c.alpha * static_cast<double>(g.vertex_weight(v)) / n +
          c.beta * params.p / v_prev;
      const double se = std::sqrt(expected * (1 - expected) / draws);
      EXPECT_NEAR(hits[v] / static_cast<double>(draws), expected, 4 * se)
          << "vertex " << v << " params p=" << params.p;
    }
  }
}

TEST(ApplyInteraction, NewVertexStep) {
  GraphState g = GraphState::initial();
  const StepDelta d = apply_interaction(
      g, InteractionChoice::new_vertex(Branch::kNewVertexUniform, 0, 1));
  ASSERT_TRUE(d.new_vertex.has_value());
  EXPECT_EQ(*d.new_vertex, 3u);
  EXPECT_EQ(d.edges_created, 2);
  EXPECT_TRUE(d.triangle_created);
  EXPECT_EQ(g.edge_weight(0, 1), 2u);
  EXPECT_EQ(g.edge_weight(0, 3), 1u);
  EXPECT_EQ(g.edge_weight(1, 3), 1u);
  EXPECT_EQ(g.triangle_weight(0, 1, 3), 1u);
  EXPECT_EQ(std::vector<std::uint64_t>(g.vertex_weights().begin(),
                                       g.vertex_weights().end()),
            (std::vector<std::uint64_t>{2, 2, 1, 1}));
  EXPECT_EQ(g.birth_step(3), 1u);
  EXPECT_TRUE(verify_invariants(g).empty());
}

TEST(ApplyInteraction, OldTripleOnInitialState) {
  GraphState g = GraphState::initial();
  const StepDelta d = apply_interaction(
      g, InteractionChoice::old_triple(Branch::kOldUniform, 0, 1, 2));
  EXPECT_FALSE(d.new_vertex.has_value());
  EXPECT_EQ(d.edges_created, 0);
  EXPECT_FALSE(d.triangle_created);
  EXPECT_EQ(g.edge_weight(0, 1), 2u);
  EXPECT_EQ(g.edge_weight(0, 2), 2u);
  EXPECT_EQ(g.edge_weight(1, 2), 2u);
  EXPECT_EQ(g.triangle_weight(0, 1, 2), 2u);
  for (VertexId v = 0; v < 3; ++v) EXPECT_EQ(g.vertex_weight(v), 2u);
}

TEST(ApplyInteraction, OldTripleCreatesMissingSide) {
  GraphState g = four_vertex_state();
  const StepDelta d = apply_interaction(
      g, InteractionChoice::old_triple(Branch::kOldUniform, 1, 2, 3));
  EXPECT_EQ(d.edges_created, 1);
  EXPECT_TRUE(d.triangle_created);
  EXPECT_EQ(g.edge_weight(1, 2), 2u);
  EXPECT_EQ(g.edge_weight(2, 3), 1u);
  EXPECT_EQ(g.edge_weight(1, 3), 2u);
  EXPECT_EQ(g.triangle_weight(1, 2, 3), 1u);
  EXPECT_EQ(g.total_edge_weight(), 9u);
  EXPECT_EQ(g.total_triangle_weight(), 3u);
  EXPECT_EQ(g.steps(), 2u);
  EXPECT_TRUE(verify_invariants(g).empty());
}

TEST(ApplyInteraction, RejectsInvalidChoices) {
  GraphState g = four_vertex_state();
  // (2, 3) is not an edge yet.
  EXPECT_THROW(apply_interaction(g, InteractionChoice::new_vertex(
                                        Branch::kNewVertexPreferential, 2, 3)),
               std::invalid_argument);
  // {1, 2, 3} has never interacted.
  EXPECT_THROW(apply_interaction(g, InteractionChoice::old_triple(
                                        Branch::kOldPreferential, 1, 2, 3)),
               std::invalid_argument);
  EXPECT_THROW(apply_interaction(g, InteractionChoice::old_triple(
                                        Branch::kOldUniform, 1, 2, 9)),
               std::invalid_argument);
  EXPECT_THROW(apply_interaction(g, InteractionChoice{Branch::kOldUniform, {2, 2, 3}}),
               std::invalid_argument);
  EXPECT_THROW(InteractionChoice::new_vertex(Branch::kOldUniform, 0, 1),
               std::invalid_argument);
  // Failed applications leave the state untouched.
  EXPECT_EQ(g, four_vertex_state());
}

TEST(ApplyInteraction, SameSequenceSameState) {
  Rng rng = make_stream(3, 0);
  const Params params{0.4, 0.5, 0.6};
  GraphState a = GraphState::initial();
  GraphState b = GraphState::initial();
  for (int i = 0; i < 2000; ++i) {
    const InteractionChoice c = choose_interaction(a, params, rng);
    apply_interaction(a, c);
    apply_interaction(b, c);
  }
  EXPECT_EQ(a, b);
}

TEST(Simulation, PerStepChangesAreBounded) {
  for (const Params& params : oracle::reference_params()) {
    Simulation sim(make_config(params, 1, 21));
    std::vector<std::uint64_t> before(sim.state().vertex_weights().begin(),
                                      sim.state().vertex_weights().end());
    WeightHistogram hist_before = weight_histogram(sim.state());
    for (int step = 0; step < 5000; ++step) {
      const StepDelta delta = sim.step();
      const auto after = sim.state().vertex_weights();
      int changed = 0;
      for (std::size_t v = 0; v < before.size(); ++v) {
        ASSERT_LE(after[v] - before[v], 1u);
        changed += static_cast<int>(after[v] - before[v]);
      }
      ASSERT_EQ(changed + (delta.new_vertex ? 1 : 0), 3);
      if (delta.new_vertex) ASSERT_EQ(after[*delta.new_vertex], 1u);

      const WeightHistogram hist_after = weight_histogram(sim.state());
      std::map<std::uint64_t, long long> diff;
      for (const auto& [w, c] : hist_before.counts) diff[w] -= static_cast<long long>(c);
      for (const auto& [w, c] : hist_after.counts) diff[w] += static_cast<long long>(c);
      for (const auto& [w, d] : diff) ASSERT_LE(std::llabs(d), 3);

      before.assign(after.begin(), after.end());
      hist_before = hist_after;
    }
  }
}

TEST(Simulation, MartingaleTermsMatchDirectSums) {
  const Params params{0.5, 0.5, 0.5};
  Simulation sim(make_config(params, 1, 8));
  const Coefficients c = coefficients(params);
  const std::uint64_t steps = 70000;  // crosses one Gamma refresh
  std::vector<double> prior_vertices;
  for (std::uint64_t i = 0; i < steps; ++i) {
    prior_vertices.push_back(static_cast<double>(sim.state().num_vertices()));
    sim.step();
  }
  const ScalingFactors s = scaling_factors(c.alpha, steps);
  long double d = 0;
  for (std::uint64_t i = 1; i <= steps; ++i) {
    d += c.beta * params.p * s.b_at(i) / prior_vertices[i - 1];
  }
  EXPECT_NEAR(sim.b() / b_closed_form(c.alpha, steps), 1.0, 1e-12);
  EXPECT_NEAR(sim.d() / static_cast<double>(d), 1.0, 1e-10);
  EXPECT_DOUBLE_EQ(sim.martingale(0),
                   sim.b() * static_cast<double>(sim.state().vertex_weight(0)) -
                       sim.d());
}

TEST(CheckpointSchedule, PowersOfTwoPlusFinal) {
  const CheckpointSchedule s;
  EXPECT_EQ(s.points(10), (std::vector<std::uint64_t>{1, 2, 4, 8, 10}));
  EXPECT_EQ(s.points(8), (std::vector<std::uint64_t>{1, 2, 4, 8}));
  EXPECT_EQ(s.points(1), (std::vector<std::uint64_t>{1}));
}

TEST(CheckpointSchedule, ParseAndPrint) {
  const CheckpointSchedule s = CheckpointSchedule::parse("pow10,50,7,50");
  EXPECT_FALSE(s.powers_of_two);
  EXPECT_TRUE(s.powers_of_ten);
  EXPECT_EQ(s.points(200), (std::vector<std::uint64_t>{1, 7, 10, 50, 100, 200}));
  EXPECT_EQ(s.to_string(), "pow10,7,50");
  EXPECT_EQ(CheckpointSchedule::parse(s.to_string()), s);
  EXPECT_THROW(CheckpointSchedule::parse("pow3"), std::invalid_argument);
  EXPECT_THROW(CheckpointSchedule::parse("0"), std::invalid_argument);
  EXPECT_THROW(CheckpointSchedule::parse("-4"), std::invalid_argument);
}

TEST(RunSimulation, Reproducible) {
  RunConfig config = make_config({0.5, 0.5, 0.5}, 20000, 42);
  config.tracked = {0, 5, 100};
  const RunResult a = run_simulation(config);
  const RunResult b = run_simulation(config);
  EXPECT_TRUE(same_outcome(a, b));

  config.replication_index = 1;
  const RunResult c = run_simulation(config);
  EXPECT_FALSE(same_outcome(a, c));
  EXPECT_NE(a.final_checkpoint().histogram, c.final_checkpoint().histogram);
}

TEST(RunSimulation, RecordsCheckpointsAndTrajectories) {
  RunConfig config = make_config({1.0, 1.0, 0.0}, 1000, 3);
  config.tracked = {0, 3, 500, 5000};
  GraphState final_state = GraphState::initial();
  const RunResult r = run_simulation(config, &final_state);

  ASSERT_EQ(r.checkpoints.size(), 11u);  // 1, 2, ..., 512, 1000
  EXPECT_EQ(r.final_checkpoint().n, 1000u);
  EXPECT_EQ(r.final_vertices, 1003u);  // p = 1: one vertex per step
  EXPECT_EQ(final_state.steps(), 1000u);
  EXPECT_EQ(weight_histogram(final_state), r.final_checkpoint().histogram);
  EXPECT_TRUE(verify_invariants(final_state).empty());

  const TrackedVertex& v0 = r.tracked[0];
  EXPECT_EQ(v0.birth_step, 0u);
  EXPECT_EQ(v0.points.size(), r.checkpoints.size());
  for (std::size_t i = 1; i < v0.points.size(); ++i) {
    EXPECT_GE(v0.points[i].weight, v0.points[i - 1].weight);
  }
  // Label 500 is born at step 498 (labels 3, 4, ... at steps 1, 2, ...).
  const TrackedVertex& v500 = r.tracked[2];
  EXPECT_EQ(v500.birth_step, 498u);
  ASSERT_EQ(v500.points.size(), 2u);  // checkpoints 512 and 1000
  EXPECT_EQ(v500.points.front().n, 512u);
  // Never born.
  EXPECT_FALSE(r.tracked[3].birth_step.has_value());
  EXPECT_TRUE(r.tracked[3].points.empty());
}

TEST(RunSimulation, InvariantsHoldForAllBranches) {
  for (const Params& params : oracle::reference_params()) {
    RunConfig config = make_config(params, 10000, 17);
    GraphState state = GraphState::initial();
    run_simulation(config, &state);
    EXPECT_TRUE(verify_invariants(state).empty());
    EXPECT_EQ(state.total_triangle_weight(), 10001u);
    EXPECT_EQ(state.total_edge_weight(), 30003u);
  }
}

TEST(RunReplications, MatchesSequentialRuns) {
  RunConfig base = make_config({0.5, 0.5, 0.5}, 3000, 9);
  const std::vector<RunResult> parallel = run_replications(base, 5, 3);
  ASSERT_EQ(parallel.size(), 5u);
  for (std::uint64_t i = 0; i < 5; ++i) {
    RunConfig config = base;
    config.replication_index = i;
    EXPECT_EQ(parallel[i].config.replication_index, i);
    EXPECT_TRUE(same_outcome(parallel[i], run_simulation(config)));
  }
}

TEST(RunReplications, PropagatesErrors) {
  RunConfig base = make_config({0.5, 0.0, 0.0}, 10, 1);
  EXPECT_THROW(run_replications(base, 2, 2), ParamsError);
}

}  // namespace
}  // namespace triad
