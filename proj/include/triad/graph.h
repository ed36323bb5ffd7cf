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

#ifndef TRIAD_GRAPH_H_
#define TRIAD_GRAPH_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include "absl/container/flat_hash_map.h"
#include <vector>

namespace triad {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint32_t;
using TriangleIndex = std::uint32_t;

// Unordered pair, stored with u < v.
struct EdgeKey {
  VertexId u = 0;
  VertexId v = 0;

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

// Unordered triple, stored with a < b < c.
struct TriangleKey {
  VertexId a = 0;
  VertexId b = 0;
  VertexId c = 0;

  friend bool operator==(const TriangleKey&, const TriangleKey&) = default;
  friend auto operator<=>(const TriangleKey&, const TriangleKey&) = default;

  bool contains(VertexId x) const { return x == a || x == b || x == c; }
};

EdgeKey make_edge_key(VertexId x, VertexId y);
TriangleKey make_triangle_key(VertexId x, VertexId y, VertexId z);

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept;
};
struct TriangleKeyHash {
  std::size_t operator()(const TriangleKey& k) const noexcept;
};

struct Edge {
  EdgeKey key;
  std::uint64_t weight = 0;
};

struct Triangle {
  TriangleKey key;
  std::uint64_t weight = 0;
};

// The evolving weighted graph.
//
// Edges and triangles are kept in creation order; the token arrays hold one
// entry per unit of weight so a uniform token is a weight-proportional draw.
// Only triangles that have taken part in an interaction are stored.
//
// The mutators below maintain the weight and token bookkeeping but not the
// per-step totals; the engine is responsible for calling them in the
// combination the dynamics prescribe and then advance_step().
class GraphState {
 public:
  // Single triangle {0, 1, 2} of weight 1 with three unit edges.
  static GraphState initial();

  std::uint64_t steps() const { return steps_; }
  std::size_t num_vertices() const { return vertex_weights_.size(); }

  std::uint64_t vertex_weight(VertexId v) const {
    return vertex_weights_.at(v);
  }
  std::span<const std::uint64_t> vertex_weights() const {
    return vertex_weights_;
  }
  // Step at which the vertex was created; 0 for the initial triangle.
  std::uint64_t birth_step(VertexId v) const { return birth_steps_.at(v); }

  // 0 when absent.
  std::uint64_t edge_weight(VertexId x, VertexId y) const;
  std::uint64_t triangle_weight(VertexId x, VertexId y, VertexId z) const;
  bool has_edge(VertexId x, VertexId y) const { return edge_weight(x, y) > 0; }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  std::span<const EdgeIndex> edge_tokens() const { return edge_tokens_; }
  std::span<const TriangleIndex> triangle_tokens() const {
    return triangle_tokens_;
  }

  // Running totals updated by the mutators.
  std::uint64_t total_edge_weight() const { return total_edge_weight_; }
  std::uint64_t total_triangle_weight() const {
    return total_triangle_weight_;
  }

  VertexId add_vertex();
  // Creates the edge at weight 1 or increments it. Returns true if created.
  bool bump_edge(VertexId x, VertexId y);
  // Creates the triangle at weight 1 or increments it, and adds 1 to the
  // weight of each corner. Returns true if created.
  bool bump_triangle(VertexId x, VertexId y, VertexId z);
  void advance_step() { ++steps_; }

  // Overwrites a stored edge weight without touching tokens, totals, or
  // vertex weights. Only useful for exercising verify_invariants().
  void overwrite_edge_weight_unchecked(VertexId x, VertexId y,
                                       std::uint64_t weight);

  friend bool operator==(const GraphState& a, const GraphState& b);

 private:
  GraphState() = default;

  std::uint64_t steps_ = 0;
  std::vector<std::uint64_t> vertex_weights_;
  std::vector<std::uint64_t> birth_steps_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  absl::flat_hash_map<EdgeKey, EdgeIndex, EdgeKeyHash> edge_index_;
  absl::flat_hash_map<TriangleKey, TriangleIndex, TriangleKeyHash>
      triangle_index_;
  std::vector<EdgeIndex> edge_tokens_;
  std::vector<TriangleIndex> triangle_tokens_;
  std::uint64_t total_edge_weight_ = 0;
  std::uint64_t total_triangle_weight_ = 0;
};

// Recomputes every structural identity from scratch. Empty iff consistent.
// Cost is linear in the size of the graph.
std::vector<std::string> verify_invariants(const GraphState& state);

// X[n, w]: number of vertices of each weight.
struct WeightHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t num_vertices = 0;

  std::uint64_t count(std::uint64_t w) const {
    auto it = counts.find(w);
    return it == counts.end() ? 0 : it->second;
  }

  friend bool operator==(const WeightHistogram&,
                         const WeightHistogram&) = default;
};

WeightHistogram weight_histogram(const GraphState& state);

// Writes vertices.csv, edges.csv and triangles.csv into `dir`.
void write_snapshot(const GraphState& state, const std::filesystem::path& dir);

}  // namespace triad

#endif  // TRIAD_GRAPH_H_
