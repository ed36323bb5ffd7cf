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

// Brute-force single-step outcome distributions in exact rational
// arithmetic. Everything here is written directly from the model rules and
// shares no sampling code with the engine.

#ifndef TRIAD_ORACLE_H_
#define TRIAD_ORACLE_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "triad/engine.h"
#include "triad/graph.h"
#include "triad/theory.h"

namespace triad::oracle {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kMaxVertices = 12;
inline constexpr std::uint64_t kMaxSteps = 64;

// Exact value of a double (every finite double is a dyadic rational).
Rational exact(double value);

struct ExactParams {
  Rational p, r, q;
};
ExactParams exact_params(const Params& params);

struct ExactCoefficients {
  Rational alpha, beta;
};
// Validates `params` like triad::coefficients.
ExactCoefficients exact_coefficients(const Params& params);

struct Outcome {
  InteractionChoice choice;
  Rational probability;
};

// Outcomes with positive probability, sorted by choice.
struct ExactStepDistribution {
  std::vector<Outcome> outcomes;
  std::string fingerprint;

  Rational total() const;
};

// Short deterministic description of a state (steps, vertex weights, edges,
// triangles).
std::string fingerprint(const GraphState& state);

// Throws std::invalid_argument beyond kMaxVertices / kMaxSteps.
ExactStepDistribution enumerate_step(const GraphState& state,
                                     const Params& params);

// Probability that `vertex` is one of the interacting vertices of the next
// step, summed over enumerated outcomes. Throws std::out_of_range for an
// unknown label.
Rational participation_probability(const GraphState& state,
                                   const Params& params, VertexId vertex);

// alpha w / n + beta p / V_{n-1} evaluated exactly for the next step
// n = state.steps() + 1.
Rational predicted_participation(const GraphState& state, const Params& params,
                                 VertexId vertex);

// CSV with header "branch,participants,numerator,denominator"; participants
// are space separated.
void write_distribution_csv(std::ostream& out,
                            const ExactStepDistribution& dist);

// Initial state followed by the states reached after each of five fixed
// interactions covering all four branches (V = 3, 4, 4, 5, 5, 6).
std::vector<GraphState> reference_states();

// Parameter sets exercising every branch combination.
std::vector<Params> reference_params();

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t degrees_of_freedom = 0;
  double p_value = 1.0;
  std::uint64_t draws = 0;
  // Engine produced a choice absent from the exact distribution.
  std::uint64_t impossible_draws = 0;

  bool passes(double significance) const {
    return impossible_draws == 0 && p_value >= significance;
  }
};

// Pearson goodness of fit of `draws` engine choices on a frozen `state`
// against enumerate_step(state, params).
ChiSquareResult engine_agreement(const GraphState& state, const Params& params,
                                 std::uint64_t draws, Rng& rng);

}  // namespace triad::oracle

#endif  // TRIAD_ORACLE_H_
