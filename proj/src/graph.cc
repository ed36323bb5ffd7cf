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

#include "triad/graph.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "triad/errors.h"

namespace triad {
namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

EdgeKey make_edge_key(VertexId x, VertexId y) {
  if (x == y) throw std::invalid_argument("edge endpoints must differ");
  return x < y ? EdgeKey{x, y} : EdgeKey{y, x};
}

TriangleKey make_triangle_key(VertexId x, VertexId y, VertexId z) {
  std::array<VertexId, 3> v = {x, y, z};
  std::sort(v.begin(), v.end());
  if (v[0] == v[1] || v[1] == v[2]) {
    throw std::invalid_argument("triangle corners must be distinct");
  }
  return TriangleKey{v[0], v[1], v[2]};
}

std::size_t EdgeKeyHash::operator()(const EdgeKey& k) const noexcept {
  return mix64((std::uint64_t{k.u} << 32) | k.v);
}

std::size_t TriangleKeyHash::operator()(const TriangleKey& k) const noexcept {
  return mix64(mix64((std::uint64_t{k.a} << 32) | k.b) ^ k.c);
}

GraphState GraphState::initial() {
  GraphState g;
  for (int i = 0; i < 3; ++i) {
    g.vertex_weights_.push_back(0);
    g.birth_steps_.push_back(0);
  }
  g.bump_edge(0, 1);
  g.bump_edge(0, 2);
  g.bump_edge(1, 2);
  g.bump_triangle(0, 1, 2);
  return g;
}

std::uint64_t GraphState::edge_weight(VertexId x, VertexId y) const {
  if (x == y) return 0;
  auto it = edge_index_.find(make_edge_key(x, y));
  return it == edge_index_.end() ? 0 : edges_[it->second].weight;
}

std::uint64_t GraphState::triangle_weight(VertexId x, VertexId y,
                                          VertexId z) const {
  if (x == y || y == z || x == z) return 0;
  auto it = triangle_index_.find(make_triangle_key(x, y, z));
  return it == triangle_index_.end() ? 0 : triangles_[it->second].weight;
}

VertexId GraphState::add_vertex() {
  const auto id = static_cast<VertexId>(vertex_weights_.size());
  vertex_weights_.push_back(0);
  birth_steps_.push_back(steps_ + 1);
  return id;
}

bool GraphState::bump_edge(VertexId x, VertexId y) {
  const EdgeKey key = make_edge_key(x, y);
  auto [it, created] =
      edge_index_.try_emplace(key, static_cast<EdgeIndex>(edges_.size()));
  if (created) edges_.push_back(Edge{key, 0});
  ++edges_[it->second].weight;
  edge_tokens_.push_back(it->second);
  ++total_edge_weight_;
  return created;
}

bool GraphState::bump_triangle(VertexId x, VertexId y, VertexId z) {
  const TriangleKey key = make_triangle_key(x, y, z);
  auto [it, created] = triangle_index_.try_emplace(
      key, static_cast<TriangleIndex>(triangles_.size()));
  if (created) triangles_.push_back(Triangle{key, 0});
  ++triangles_[it->second].weight;
  triangle_tokens_.push_back(it->second);
  ++total_triangle_weight_;
  ++vertex_weights_.at(key.a);
  ++vertex_weights_.at(key.b);
  ++vertex_weights_.at(key.c);
  return created;
}

void GraphState::overwrite_edge_weight_unchecked(VertexId x, VertexId y,
                                                 std::uint64_t weight) {
  auto it = edge_index_.find(make_edge_key(x, y));
  if (it == edge_index_.end()) throw std::out_of_range("no such edge");
  edges_[it->second].weight = weight;
}

bool operator==(const GraphState& a, const GraphState& b) {
  auto same_edges = [](const std::vector<Edge>& x, const std::vector<Edge>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const Edge& l, const Edge& r) {
                        return l.key == r.key && l.weight == r.weight;
                      });
  };
  auto same_triangles = [](const std::vector<Triangle>& x,
                           const std::vector<Triangle>& y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](const Triangle& l, const Triangle& r) {
                        return l.key == r.key && l.weight == r.weight;
                      });
  };
  return a.steps_ == b.steps_ && a.vertex_weights_ == b.vertex_weights_ &&
         a.birth_steps_ == b.birth_steps_ && same_edges(a.edges_, b.edges_) &&
         same_triangles(a.triangles_, b.triangles_) &&
         a.edge_tokens_ == b.edge_tokens_ &&
         a.triangle_tokens_ == b.triangle_tokens_;
}

std::vector<std::string> verify_invariants(const GraphState& state) {
  std::vector<std::string> out;
  auto report = [&out](const std::string& identity, const auto& got,
                       const auto& want) {
    std::ostringstream msg;
    msg << identity << ": got " << got << ", expected " << want;
    out.push_back(msg.str());
  };

  const std::uint64_t n = state.steps();
  const std::size_t num_vertices = state.num_vertices();

  std::uint64_t edge_sum = 0;
  std::vector<std::uint64_t> incident_edge_weight(num_vertices, 0);
  for (const Edge& e : state.edges()) {
    edge_sum += e.weight;
    if (e.weight == 0) report("edge weight positive", e.weight, "> 0");
    if (e.key.u >= num_vertices || e.key.v >= num_vertices) {
      report("edge endpoint exists", e.key.v, num_vertices);
      continue;
    }
    incident_edge_weight[e.key.u] += e.weight;
    incident_edge_weight[e.key.v] += e.weight;
  }
  std::uint64_t triangle_sum = 0;
  std::vector<std::uint64_t> triangle_weight(num_vertices, 0);
  for (const Triangle& t : state.triangles()) {
    triangle_sum += t.weight;
    if (t.weight == 0) report("triangle weight positive", t.weight, "> 0");
    if (t.key.c >= num_vertices) {
      report("triangle corner exists", t.key.c, num_vertices);
      continue;
    }
    triangle_weight[t.key.a] += t.weight;
    triangle_weight[t.key.b] += t.weight;
    triangle_weight[t.key.c] += t.weight;
    // Every interacting triple has all three sides drawn.
    if (!state.has_edge(t.key.a, t.key.b) ||
        !state.has_edge(t.key.a, t.key.c) ||
        !state.has_edge(t.key.b, t.key.c)) {
      report("triangle sides present", "missing side", "three edges");
    }
  }

  if (triangle_sum != n + 1) report("triangle-weight total", triangle_sum, n + 1);
  if (edge_sum != 3 * (n + 1)) report("edge-weight total", edge_sum, 3 * (n + 1));
  if (state.total_triangle_weight() != triangle_sum) {
    report("running triangle-weight total", state.total_triangle_weight(),
           triangle_sum);
  }
  if (state.total_edge_weight() != edge_sum) {
    report("running edge-weight total", state.total_edge_weight(), edge_sum);
  }

  std::uint64_t vertex_sum = 0;
  std::uint64_t births = 0;
  for (VertexId v = 0; v < num_vertices; ++v) {
    const std::uint64_t w = state.vertex_weight(v);
    vertex_sum += w;
    if (w == 0) report("vertex weight positive (vertex " + std::to_string(v) + ")", w, "> 0");
    if (w != triangle_weight[v]) {
      report("vertex weight = sum of containing triangle weights (vertex " +
                 std::to_string(v) + ")",
             w, triangle_weight[v]);
    }
    if (2 * w != incident_edge_weight[v]) {
      report("vertex weight = half incident edge weight (vertex " +
                 std::to_string(v) + ")",
             2 * w, incident_edge_weight[v]);
    }
    if (state.birth_step(v) > 0) ++births;
  }
  if (vertex_sum != 3 * (n + 1)) {
    report("vertex-weight total", vertex_sum, 3 * (n + 1));
  }
  if (num_vertices != 3 + births) {
    report("vertex count = 3 + births", num_vertices, 3 + births);
  }

  if (state.edge_tokens().size() != edge_sum) {
    report("edge token count", state.edge_tokens().size(), edge_sum);
  }
  if (state.triangle_tokens().size() != triangle_sum) {
    report("triangle token count", state.triangle_tokens().size(),
           triangle_sum);
  }
  std::vector<std::uint64_t> edge_counts(state.edges().size(), 0);
  for (EdgeIndex i : state.edge_tokens()) {
    if (i < edge_counts.size()) ++edge_counts[i];
  }
  for (std::size_t i = 0; i < edge_counts.size(); ++i) {
    if (edge_counts[i] != state.edges()[i].weight) {
      report("edge token multiplicity (edge " + std::to_string(i) + ")",
             edge_counts[i], state.edges()[i].weight);
    }
  }
  std::vector<std::uint64_t> triangle_counts(state.triangles().size(), 0);
  for (TriangleIndex i : state.triangle_tokens()) {
    if (i < triangle_counts.size()) ++triangle_counts[i];
  }
  for (std::size_t i = 0; i < triangle_counts.size(); ++i) {
    if (triangle_counts[i] != state.triangles()[i].weight) {
      report("triangle token multiplicity (triangle " + std::to_string(i) + ")",
             triangle_counts[i], state.triangles()[i].weight);
    }
  }
  return out;
}

WeightHistogram weight_histogram(const GraphState& state) {
  WeightHistogram h;
  for (std::uint64_t w : state.vertex_weights()) ++h.counts[w];
  h.num_vertices = state.num_vertices();
  return h;
}

void write_snapshot(const GraphState& state, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  auto vertices = open_for_write(dir / "vertices.csv");
  vertices << "label,weight\n";
  for (VertexId v = 0; v < state.num_vertices(); ++v) {
    vertices << v << ',' << state.vertex_weight(v) << '\n';
  }

  auto edges = open_for_write(dir / "edges.csv");
  edges << "u,v,weight\n";
  for (const Edge& e : state.edges()) {
    edges << e.key.u << ',' << e.key.v << ',' << e.weight << '\n';
  }

  auto triangles = open_for_write(dir / "triangles.csv");
  triangles << "u,v,w,weight\n";
  for (const Triangle& t : state.triangles()) {
    triangles << t.key.a << ',' << t.key.b << ',' << t.key.c << ','
              << t.weight << '\n';
  }
  if (!vertices || !edges || !triangles) {
    throw IoError("failed writing snapshot to " + dir.string());
  }
}

}  // namespace triad
