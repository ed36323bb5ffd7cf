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

#ifndef TRIAD_RUN_IO_H_
#define TRIAD_RUN_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "triad/engine.h"

namespace triad {

// On-disk layout of one replication:
//   manifest.json   config, version, totals, tracked-vertex births
//   histogram.csv   checkpoint_n,w,count,V_n
//   trajectory.csv  vertex_label,n,W,Z
// Doubles are written in shortest round-trip form, so a run read back is
// same_outcome() with the one written. Wall time is not written.
nlohmann::json manifest_json(const RunResult& result);
void write_run(const RunResult& result, const std::filesystem::path& dir);
RunResult read_run(const std::filesystem::path& dir);

// "run-<index>" subdirectories of `root`, sorted by index.
std::vector<std::filesystem::path> find_run_dirs(const std::filesystem::path& root);

}  // namespace triad

#endif  // TRIAD_RUN_IO_H_
