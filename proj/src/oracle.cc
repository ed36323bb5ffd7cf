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

#include "triad/oracle.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace triad::oracle {

Rational exact(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an integer for every double.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational result(scaled);
  exponent -= 53;
  boost::multiprecision::cpp_int power = 1;
  power <<= std::abs(exponent);
  if (exponent >= 0) {
    result *= Rational(power);
  } else {
    result /= Rational(power);
  }
  return result;
}

ExactParams exact_params(const Params& params) {
  return ExactParams{exact(params.p), exact(params.r), exact(params.q)};
}

ExactCoefficients exact_coefficients(const Params& params) {
  validate(params);
  const ExactParams e = exact_params(params);
  const Rational one(1);
  ExactCoefficients c;
  c.alpha = Rational(2, 3) * e.p * e.r + (one - e.p) * e.q;
  c.beta = (Rational(2) * e.p * (one - e.r) +
            Rational(3) * (one - e.p) * (one - e.q)) /
           e.p;
  return c;
}

Rational ExactStepDistribution::total() const {
  Rational sum(0);
  for (const Outcome& o : outcomes) sum += o.probability;
  return sum;
}

std::string fingerprint(const GraphState& state) {
  std::ostringstream out;
  out << "n=" << state.steps() << ";W=";
  for (std::size_t v = 0; v < state.num_vertices(); ++v) {
    if (v) out << ' ';
    out << state.vertex_weight(static_cast<VertexId>(v));
  }
  std::vector<Edge> edges = state.edges();
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.key < b.key; });
  out << ";E=";
  for (const Edge& e : edges) {
    out << e.key.u << '-' << e.key.v << ':' << e.weight << ' ';
  }
  std::vector<Triangle> triangles = state.triangles();
  std::sort(triangles.begin(), triangles.end(),
            [](const Triangle& a, const Triangle& b) { return a.key < b.key; });
  out << ";T=";
  for (const Triangle& t : triangles) {
    out << t.key.a << '-' << t.key.b << '-' << t.key.c << ':' << t.weight
        << ' ';
  }
  return out.str();
}

ExactStepDistribution enumerate_step(const GraphState& state,
                                     const Params& params) {
  const std::size_t num_vertices = state.num_vertices();
  if (num_vertices > kMaxVertices || state.steps() > kMaxSteps) {
    throw std::invalid_argument("state too large to enumerate (V=" +
                                std::to_string(num_vertices) + ", n=" +
                                std::to_string(state.steps()) + ")");
  }
  validate(params);
  const ExactParams e = exact_params(params);
  const Rational one(1);

  // Totals recomputed from stored weights, not from the running counters.
  Rational edge_total(0);
  for (const Edge& edge : state.edges()) edge_total += Rational(edge.weight);
  Rational triangle_total(0);
  for (const Triangle& t : state.triangles()) triangle_total += Rational(t.weight);

  const Rational v(static_cast<long long>(num_vertices));
  const Rational pairs = v * (v - 1) / 2;
  const Rational triples = v * (v - 1) * (v - 2) / 6;

  ExactStepDistribution dist;
  dist.fingerprint = fingerprint(state);
  auto emit = [&dist](InteractionChoice choice, Rational probability) {
    if (probability > 0) {
      dist.outcomes.push_back(Outcome{choice, std::move(probability)});
    }
  };

  const Rational new_pref = e.p * e.r;
  const Rational new_unif = e.p * (one - e.r);
  const Rational old_pref = (one - e.p) * e.q;
  const Rational old_unif = (one - e.p) * (one - e.q);

  for (const Edge& edge : state.edges()) {
    emit(InteractionChoice::new_vertex(Branch::kNewVertexPreferential,
                                       edge.key.u, edge.key.v),
         new_pref * Rational(edge.weight) / edge_total);
  }
  for (VertexId a = 0; a < num_vertices; ++a) {
    for (VertexId b = a + 1; b < num_vertices; ++b) {
      emit(InteractionChoice::new_vertex(Branch::kNewVertexUniform, a, b),
           new_unif / pairs);
    }
  }
  for (const Triangle& t : state.triangles()) {
    emit(InteractionChoice::old_triple(Branch::kOldPreferential, t.key.a,
                                       t.key.b, t.key.c),
         old_pref * Rational(t.weight) / triangle_total);
  }
  for (VertexId a = 0; a < num_vertices; ++a) {
    for (VertexId b = a + 1; b < num_vertices; ++b) {
      for (VertexId c = b + 1; c < num_vertices; ++c) {
        emit(InteractionChoice::old_triple(Branch::kOldUniform, a, b, c),
             old_unif / triples);
      }
    }
  }
  std::sort(dist.outcomes.begin(), dist.outcomes.end(),
            [](const Outcome& x, const Outcome& y) { return x.choice < y.choice; });
  return dist;
}

Rational participation_probability(const GraphState& state,
                                   const Params& params, VertexId vertex) {
  if (vertex >= state.num_vertices()) {
    throw std::out_of_range("unknown vertex " + std::to_string(vertex));
  }
  Rational sum(0);
  for (const Outcome& o : enumerate_step(state, params).outcomes) {
    const auto ps = o.choice.participants();
    if (std::find(ps.begin(), ps.end(), vertex) != ps.end()) {
      sum += o.probability;
    }
  }
  return sum;
}

Rational predicted_participation(const GraphState& state, const Params& params,
                                 VertexId vertex) {
  if (vertex >= state.num_vertices()) {
    throw std::out_of_range("unknown vertex " + std::to_string(vertex));
  }
  const ExactCoefficients c = exact_coefficients(params);
  const Rational n(static_cast<long long>(state.steps() + 1));
  const Rational w(static_cast<long long>(state.vertex_weight(vertex)));
  const Rational prior_vertices(static_cast<long long>(state.num_vertices()));
  return c.alpha * w / n + c.beta * exact(params.p) / prior_vertices;
}

void write_distribution_csv(std::ostream& out,
                            const ExactStepDistribution& dist) {
  out << "branch,participants,numerator,denominator\n";
  for (const Outcome& o : dist.outcomes) {
    out << branch_name(o.choice.branch) << ',';
    const auto ps = o.choice.participants();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if (i) out << ' ';
      out << ps[i];
    }
    out << ',' << numerator(o.probability) << ','
        << denominator(o.probability) << '\n';
  }
}

std::vector<GraphState> reference_states() {
  const std::vector<InteractionChoice> script = {
      InteractionChoice::new_vertex(Branch::kNewVertexUniform, 0, 1),
      InteractionChoice::old_triple(Branch::kOldUniform, 1, 2, 3),
      InteractionChoice::new_vertex(Branch::kNewVertexPreferential, 0, 1),
      InteractionChoice::old_triple(Branch::kOldPreferential, 0, 1, 3),
      InteractionChoice::new_vertex(Branch::kNewVertexUniform, 2, 4),
  };
  std::vector<GraphState> states = {GraphState::initial()};
  for (const InteractionChoice& choice : script) {
    GraphState next = states.back();
    apply_interaction(next, choice);
    states.push_back(std::move(next));
  }
  return states;
}

std::vector<Params> reference_params() {
  return {Params{1.0, 1.0, 0.0}, Params{0.5, 0.5, 0.5}, Params{0.5, 0.0, 1.0},
          Params{0.3, 0.9, 0.2}};
}

ChiSquareResult engine_agreement(const GraphState& state, const Params& params,
                                 std::uint64_t draws, Rng& rng) {
  const ExactStepDistribution dist = enumerate_step(state, params);
  std::map<InteractionChoice, std::uint64_t> observed;
  for (std::uint64_t i = 0; i < draws; ++i) {
    ++observed[choose_interaction(state, params, rng)];
  }

  ChiSquareResult result;
  result.draws = draws;
  const double total = static_cast<double>(draws);
  for (const Outcome& o : dist.outcomes) {
    const double expected =
        total * o.probability.convert_to<double>();
    auto it = observed.find(o.choice);
    const double seen =
        it == observed.end() ? 0.0 : static_cast<double>(it->second);
    if (it != observed.end()) observed.erase(it);
    result.statistic += (seen - expected) * (seen - expected) / expected;
  }
  for (const auto& [choice, count] : observed) result.impossible_draws += count;

  result.degrees_of_freedom = dist.outcomes.empty() ? 0 : dist.outcomes.size() - 1;
  if (result.degrees_of_freedom == 0) {
    result.p_value = result.impossible_draws == 0 ? 1.0 : 0.0;
  } else {
    boost::math::chi_squared_distribution<double> chi2(
        static_cast<double>(result.degrees_of_freedom));
    result.p_value = boost::math::cdf(boost::math::complement(chi2, result.statistic));
  }
  return result;
}

}  // namespace triad::oracle
