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

#ifndef DCS_SCENARIO_HPP_
#define DCS_SCENARIO_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dcs/agent.hpp"
#include "dcs/contribution.hpp"

namespace dcs {

// Parent selection as written in a scenario: rules that need rids are
// expressed as references to earlier intents and resolved while the run
// executes.
struct ParentSpec {
  ParentRuleKind kind = ParentRuleKind::kEmpty;
  std::vector<size_t> intent_refs;  // 0-based indices into Scenario::intents

  static ParentSpec empty() { return {ParentRuleKind::kEmpty, {}}; }
  static ParentSpec frontier() { return {ParentRuleKind::kFrontier, {}}; }
  static ParentSpec explicit_intents(std::vector<size_t> refs) {
    return {ParentRuleKind::kExplicit, std::move(refs)};
  }
  static ParentSpec first_observed_of(std::vector<size_t> refs) {
    return {ParentRuleKind::kFirstObservedOf, std::move(refs)};
  }
};

struct ScenarioIntent {
  uint64_t tick = 1;
  AgentId agent = 1;
  std::string key;
  SemilatticeValue payload;
  ParentSpec parents;

  // Violation scaffolding; set only by the injector module, never from files.
  std::optional<Rid> forged_rid;
  std::optional<RidSet> forged_parent_rids;
  // Scripted exact delivery delays per recipient: (even-seed, odd-seed).
  // Used by canonical violation scenarios to realize both sides of a race.
  std::map<AgentId, std::pair<uint64_t, uint64_t>> scripted_delays;
};

// A replayable experiment description: agents, key bindings, subscriptions,
// scripted contribution intents, crashes, and config/policy defaults.
// Deterministic given a seed.
struct Scenario {
  std::string name;
  uint32_t n_agents = 0;
  KeySpaces key_spaces;
  std::map<std::string, std::set<AgentId>> rel;  // Rel(k); absent key -> all agents
  std::vector<ScenarioIntent> intents;
  std::map<AgentId, uint64_t> crash_ticks;
  std::map<std::string, std::string> config_overrides;
  std::string policy_spec = "fifo";

  std::set<AgentId> relevant(const std::string& key) const;
  void validate() const;  // throws ConfigError / ParseError
};

Scenario parse_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);

// Scenarios used throughout the experiments. "builtin:<name>" resolves via
// builtin_scenario.
Scenario fig6a_scenario();
Scenario fig6b_scenario();
Scenario fig1_partition_scenario();
Scenario ordering_matrix_scenario();
Scenario crash_scenario();

// Random lawful scenario whose contribution set does not depend on the
// network seed: parent references are explicit, and cross-agent references
// only target intents old enough that weak fairness has delivered them.
Scenario make_random_scenario(uint64_t gen_seed, uint32_t n_agents,
                              uint32_t n_contributions, uint64_t fairness_bound);

std::optional<Scenario> builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

}  // namespace dcs

#endif  // DCS_SCENARIO_HPP_
