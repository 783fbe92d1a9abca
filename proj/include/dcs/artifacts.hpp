/*
 * Copyright (c) 2026, the dcs authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef DCS_ARTIFACTS_HPP_
#define DCS_ARTIFACTS_HPP_

#include <filesystem>
#include <iosfwd>

#include "dcs/network_sim.hpp"

namespace dcs {

// Everything needed to reproduce a run, written atomically before any run
// output.
struct RunManifest {
  std::string scenario_ref;  // file path or builtin:<name>
  std::string scenario_name;
  std::vector<std::pair<std::string, std::string>> config_overrides;  // ordered
  uint64_t seed = 0;
  std::string mode = "lawful";
  std::string policy;  // empty means scenario default
  std::string build_id = DCS_BUILD_ID;
  std::string digest_algorithm = kDigestAlgorithm;

  std::string text() const;
  std::string digest() const;  // sha256 hex of text()
  static RunManifest parse(std::string_view text);
};

void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string contributions_log_text(const std::vector<Contribution>& created);
std::vector<Contribution> parse_contribution_log(std::istream& in);
std::vector<Contribution> load_contribution_log(const std::filesystem::path& path);

std::string trace_text(const ExecutionRecord& rec);
std::string states_table_text(const ExecutionRecord& rec);

// manifest.txt, trace.log, contributions.log, states.tsv, dag.txt, dag.dot
void write_run_artifacts(const std::filesystem::path& dir, const RunManifest& manifest,
                         const ExecutionRecord& rec);

// Digest over (relative path, file digest) pairs, sorted; byte-identical
// trees give identical digests.
std::string tree_digest(const std::filesystem::path& dir);

// Resolves "builtin:<name>" or a file path, applies manifest overrides, and
// replays the run the manifest describes.
Scenario resolve_scenario(const std::string& ref);
ExecutionRecord replay_manifest(const RunManifest& manifest);

}  // namespace dcs

#endif  // DCS_ARTIFACTS_HPP_
