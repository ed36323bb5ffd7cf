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

#include "triad/run_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "format.h"
#include "triad/errors.h"

namespace triad {
namespace {

using internal::format_double;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const std::filesystem::path& file) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IoError("malformed number '" + text + "' in " + file.string());
  }
  return value;
}

// Yields the data rows of a CSV after checking the header.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& header,
                                               std::size_t columns) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError("unexpected header in " + path.string());
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != columns) {
      throw IoError("wrong column count in " + path.string());
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

nlohmann::json manifest_json(const RunResult& result) {
  const RunConfig& c = result.config;
  nlohmann::json tracked = nlohmann::json::array();
  nlohmann::json unborn = nlohmann::json::array();
  for (const TrackedVertex& t : result.tracked) {
    tracked.push_back(
        {{"label", t.label},
         {"birth_step", t.birth_step ? nlohmann::json(*t.birth_step)
                                     : nlohmann::json(nullptr)}});
    if (!t.birth_step) unborn.push_back(t.label);
  }
  const std::uint64_t n = result.checkpoints.empty() ? 0 : result.checkpoints.back().n;
  return {
      {"version", result.version},
      {"params", {{"p", c.params.p}, {"r", c.params.r}, {"q", c.params.q}}},
      {"n_steps", c.n_steps},
      {"seed", c.seed},
      {"replication_index", c.replication_index},
      {"checkpoints", c.checkpoints.to_string()},
      {"checkpoint_points", c.checkpoints.points(c.n_steps)},
      {"audit_checkpoints", c.audit_checkpoints},
      {"tracked", tracked},
      {"unborn_tracked", unborn},
      {"totals",
       {{"vertices", result.final_vertices},
        {"edges", result.final_edges},
        {"triangles", result.final_triangles},
        {"edge_weight", 3 * (n + 1)},
        {"triangle_weight", n + 1}}},
      {"final_b", result.final_b},
      {"final_d", result.final_d},
  };
}

void write_run(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  {
    auto out = open_out(dir / "manifest.json");
    out << manifest_json(result).dump(2) << '\n';
    if (!out) throw IoError("failed writing manifest in " + dir.string());
  }
  {
    auto out = open_out(dir / "histogram.csv");
    out << "checkpoint_n,w,count,V_n\n";
    for (const Checkpoint& cp : result.checkpoints) {
      for (const auto& [w, count] : cp.histogram.counts) {
        out << cp.n << ',' << w << ',' << count << ','
            << cp.histogram.num_vertices << '\n';
      }
    }
    if (!out) throw IoError("failed writing histogram in " + dir.string());
  }
  {
    auto out = open_out(dir / "trajectory.csv");
    out << "vertex_label,n,W,Z\n";
    for (const TrackedVertex& t : result.tracked) {
      for (const TrajectoryPoint& p : t.points) {
        out << t.label << ',' << p.n << ',' << p.weight << ','
            << format_double(p.martingale) << '\n';
      }
    }
    if (!out) throw IoError("failed writing trajectory in " + dir.string());
  }
}

RunResult read_run(const std::filesystem::path& dir) {
  nlohmann::json m;
  {
    auto in = open_in(dir / "manifest.json");
    try {
      in >> m;
    } catch (const nlohmann::json::exception& e) {
      throw IoError("malformed manifest in " + dir.string() + ": " + e.what());
    }
  }

  RunResult r;
  try {
    RunConfig& c = r.config;
    c.params = Params{m.at("params").at("p").get<double>(),
                      m.at("params").at("r").get<double>(),
                      m.at("params").at("q").get<double>()};
    c.n_steps = m.at("n_steps").get<std::uint64_t>();
    c.seed = m.at("seed").get<std::uint64_t>();
    c.replication_index = m.at("replication_index").get<std::uint64_t>();
    c.checkpoints = CheckpointSchedule::parse(m.at("checkpoints").get<std::string>());
    c.audit_checkpoints = m.at("audit_checkpoints").get<bool>();
    c.tracked.clear();
    for (const auto& t : m.at("tracked")) {
      TrackedVertex tv;
      tv.label = t.at("label").get<VertexId>();
      if (!t.at("birth_step").is_null()) {
        tv.birth_step = t.at("birth_step").get<std::uint64_t>();
      }
      c.tracked.push_back(tv.label);
      r.tracked.push_back(tv);
    }
    r.version = m.at("version").get<std::string>();
    r.final_vertices = m.at("totals").at("vertices").get<std::uint64_t>();
    r.final_edges = m.at("totals").at("edges").get<std::uint64_t>();
    r.final_triangles = m.at("totals").at("triangles").get<std::uint64_t>();
    r.final_b = m.at("final_b").get<double>();
    r.final_d = m.at("final_d").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError("incomplete manifest in " + dir.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError("bad manifest in " + dir.string() + ": " + e.what());
  }

  const auto hist_path = dir / "histogram.csv";
  for (const auto& row : read_csv(hist_path, "checkpoint_n,w,count,V_n", 4)) {
    const auto n = parse_number<std::uint64_t>(row[0], hist_path);
    if (r.checkpoints.empty() || r.checkpoints.back().n != n) {
      r.checkpoints.push_back(Checkpoint{n, {}});
    }
    WeightHistogram& h = r.checkpoints.back().histogram;
    h.counts[parse_number<std::uint64_t>(row[1], hist_path)] =
        parse_number<std::uint64_t>(row[2], hist_path);
    h.num_vertices = parse_number<std::uint64_t>(row[3], hist_path);
  }

  const auto traj_path = dir / "trajectory.csv";
  for (const auto& row : read_csv(traj_path, "vertex_label,n,W,Z", 4)) {
    const auto label = parse_number<VertexId>(row[0], traj_path);
    auto it = std::find_if(r.tracked.begin(), r.tracked.end(),
                           [label](const TrackedVertex& t) { return t.label == label; });
    if (it == r.tracked.end()) {
      throw IoError("trajectory for untracked vertex in " + traj_path.string());
    }
    it->points.push_back(TrajectoryPoint{parse_number<std::uint64_t>(row[1], traj_path),
                                         parse_number<std::uint64_t>(row[2], traj_path),
                                         parse_number<double>(row[3], traj_path)});
  }
  return r;
}

std::vector<std::filesystem::path> find_run_dirs(const std::filesystem::path& root) {
  std::error_code ec;
  std::vector<std::pair<std::uint64_t, std::filesystem::path>> found;
  for (const auto& entry : std::filesystem::directory_iterator(root, ec)) {
    const std::string name = entry.path().filename().string();
    if (!entry.is_directory() || name.rfind("run-", 0) != 0) continue;
    std::uint64_t index = 0;
    const char* begin = name.data() + 4;
    const char* end = name.data() + name.size();
    auto [ptr, perr] = std::from_chars(begin, end, index);
    if (perr != std::errc() || ptr != end) continue;
    found.emplace_back(index, entry.path());
  }
  if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
  std::sort(found.begin(), found.end());
  std::vector<std::filesystem::path> out;
  for (auto& [index, path] : found) out.push_back(std::move(path));
  return out;
}

}  // namespace triad
