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

#include "dcs/artifacts.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dcs/errors.hpp"

namespace dcs {

std::string RunManifest::text() const {
  std::ostringstream os;
  os << "# dcs-manifest v1\n";
  os << "scenario " << scenario_ref << "\n";
  os << "scenario-name " << scenario_name << "\n";
  os << "seed " << seed << "\n";
  os << "mode " << mode << "\n";
  if (!policy.empty()) os << "policy " << policy << "\n";
  for (const auto& [k, v] : config_overrides) os << "config " << k << "=" << v << "\n";
  os << "build " << build_id << "\n";
  os << "digest-algorithm " << digest_algorithm << "\n";
  return os.str();
}

std::string RunManifest::digest() const { return digest_hex(sha256(text())); }

RunManifest RunManifest::parse(std::string_view text) {
  RunManifest m;
  m.config_overrides.clear();
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string directive, rest;
    ls >> directive;
    ls >> rest;
    if (directive == "scenario") m.scenario_ref = rest;
    else if (directive == "scenario-name") m.scenario_name = rest;
    else if (directive == "seed") m.seed = std::stoull(rest);
    else if (directive == "mode") m.mode = rest;
    else if (directive == "policy") m.policy = rest;
    else if (directive == "build") m.build_id = rest;
    else if (directive == "digest-algorithm") m.digest_algorithm = rest;
    else if (directive == "config") {
      auto eq = rest.find('=');
      if (eq == std::string::npos) throw ParseError("manifest config needs key=value");
      m.config_overrides.emplace_back(rest.substr(0, eq), rest.substr(eq + 1));
    } else {
      throw ParseError("unknown manifest directive '" + directive + "'");
    }
  }
  if (m.scenario_ref.empty()) throw ParseError("manifest names no scenario");
  return m;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string contributions_log_text(const std::vector<Contribution>& created) {
  std::ostringstream os;
  os << log_header() << "\n";
  for (const Contribution& c : created) os << log_record(c) << "\n";
  return os.str();
}

std::vector<Contribution> parse_contribution_log(std::istream& in) {
  std::vector<Contribution> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_log_record(line));
  }
  return out;
}

std::vector<Contribution> load_contribution_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("log not found: " + path.string());
  return parse_contribution_log(in);
}

std::string trace_text(const ExecutionRecord& rec) {
  std::ostringstream os;
  for (const std::string& line : rec.trace) os << line << "\n";
  return os.str();
}

std::string states_table_text(const ExecutionRecord& rec) {
  std::ostringstream os;
  os << "agent\tlive\tkey\tvalue\n";
  for (const AgentState& a : rec.agents) {
    for (const auto& [key, _] : rec.key_spaces.bindings()) {
      if (!a.subscribed(key)) continue;
      os << a.id() << '\t' << (rec.is_live(a.id()) ? "yes" : "crashed") << '\t' << key
         << '\t' << print_value(a.state(key)) << "\n";
    }
  }
  return os.str();
}

void write_run_artifacts(const std::filesystem::path& dir, const RunManifest& manifest,
                         const ExecutionRecord& rec) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "manifest.txt", manifest.text());
  write_file_atomic(dir / "trace.log", trace_text(rec));
  write_file_atomic(dir / "contributions.log", contributions_log_text(rec.created));
  write_file_atomic(dir / "states.tsv", states_table_text(rec));
  write_file_atomic(dir / "dag.txt", rec.global_dag.canonical_text());
  write_file_atomic(dir / "dag.dot", rec.global_dag.dot_export());
}

std::string tree_digest(const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    entries.emplace_back(std::filesystem::relative(e.path(), dir).generic_string(),
                         digest_hex(sha256(buf.str())));
  }
  std::sort(entries.begin(), entries.end());
  std::ostringstream all;
  for (const auto& [rel, d] : entries) all << rel << " " << d << "\n";
  return digest_hex(sha256(all.str()));
}

Scenario resolve_scenario(const std::string& ref) {
  if (ref.rfind("builtin:", 0) == 0) {
    auto s = builtin_scenario(ref.substr(8));
    if (!s.has_value()) throw ConfigError("unknown builtin scenario '" + ref + "'");
    return *s;
  }
  return load_scenario_file(ref);
}

ExecutionRecord replay_manifest(const RunManifest& manifest) {
  Scenario scenario = resolve_scenario(manifest.scenario_ref);
  if (!manifest.policy.empty()) scenario.policy_spec = manifest.policy;
  NetworkConfig cfg = scenario_config(scenario, manifest.seed);
  for (const auto& [k, v] : manifest.config_overrides) apply_config_override(cfg, k, v);
  cfg.validate();
  RunOptions opts;
  auto mode = violation_mode_from_name(manifest.mode);
  if (!mode.has_value()) throw ConfigError("unknown mode '" + manifest.mode + "'");
  opts.mode = *mode;
  return run_simulation(scenario, cfg, opts);
}

}  // namespace dcs
