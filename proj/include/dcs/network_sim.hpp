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

#ifndef DCS_NETWORK_SIM_HPP_
#define DCS_NETWORK_SIM_HPP_

#include <memory>

#include "dcs/policy.hpp"
#include "dcs/scenario.hpp"

namespace dcs {

enum class ViolationMode {
  kLawful,
  kNoFairness,      // axiom 1 off: no forced delivery
  kNonSemilattice,  // axiom 2 off: overwrite-register merge
  kDuplicateRid,    // axiom 3 off: forged colliding rids
  kMutableParents,  // axiom 4 off: parents rewritten under a stale rid
  kCausalForgery,   // axiom 5 off: forward references permitted
};

std::string violation_mode_name(ViolationMode m);
std::optional<ViolationMode> violation_mode_from_name(const std::string& name);

// Unreliable-network knobs. Virtual time is integer ticks; there is no wall
// clock anywhere. One pseudo-random stream per run, split per sender/receiver
// channel, so adding an agent does not perturb the other channels' draws.
struct NetworkConfig {
  double drop_probability = 0.0;
  double duplicate_probability = 0.0;  // geometric extra copies, capped
  uint64_t max_reorder_delay = 0;      // extra delivery delay in [0, max]
  bool fairness_enabled = true;
  uint64_t fairness_bound = 10;  // forced-delivery horizon after first send
  uint64_t seed = 0;
  std::set<std::pair<AgentId, AgentId>> partition;  // blocked (from, to) pairs
  uint64_t event_budget = 1000000;

  // Extra delivery copies per recipient follow a geometric rule capped here;
  // tests compute the expected copy count from these two constants.
  static constexpr int kMaxDuplicates = 3;

  void validate() const;  // throws ConfigError
  std::string text() const;
};

// "drop=0.3", "dup=0.2", "reorder=3", "fairness=on|off", "bound=12",
// "budget=1000000", "block=3-2,1-2" (comma list of from-to pairs).
void apply_config_override(NetworkConfig& cfg, const std::string& key,
                           const std::string& value);

// Scenario defaults plus the run seed.
NetworkConfig scenario_config(const Scenario& s, uint64_t seed);

struct RunOptions {
  ViolationMode mode = ViolationMode::kLawful;
  // Overrides the scenario's policy_spec when set.
  std::shared_ptr<const OperationalPolicy> policy;
};

// Everything a finished run exposes: final agent views, the global history,
// the creation-ordered contribution log, and a replayable trace.
struct ExecutionRecord {
  std::string scenario_name;
  NetworkConfig config;
  ViolationMode mode = ViolationMode::kLawful;
  std::string policy_tag;

  std::vector<AgentState> agents;  // index i holds agent i+1
  std::set<AgentId> crashed;
  KeySpaces key_spaces;
  ProvenanceDag global_dag;
  std::vector<Contribution> created;
  std::vector<std::string> trace;
  std::string trace_digest;  // hex sha256 over the trace lines

  bool quiescent = true;
  bool structural_ambiguity = false;  // lawful-mode rid collision aborted the run
  bool ill_defined = false;           // duplicate rid with different content seen
  bool cycle_detected = false;
  bool fairness_delivery_ok = true;  // every live relevant agent saw every record
  std::string note;

  const AgentState& agent(AgentId id) const { return agents.at(id - 1); }
  bool is_live(AgentId id) const { return crashed.count(id) == 0; }

  // join of all created payloads per key: the state every live relevant
  // agent must converge to under fairness.
  std::map<std::string, SemilatticeValue> expected_final_states() const;

  // True when every live relevant agent's per-key state equals the join of
  // all created payloads for that key.
  bool converged() const;
};

// Drives the scenario to quiescence. Single-threaded; identical
// (scenario, config, options) inputs produce byte-identical records.
ExecutionRecord run_simulation(const Scenario& scenario, const NetworkConfig& config,
                               const RunOptions& options = {});

// Convenience: scenario defaults with the given seed.
ExecutionRecord run_simulation(const Scenario& scenario, uint64_t seed,
                               const RunOptions& options = {});

}  // namespace dcs

#endif  // DCS_NETWORK_SIM_HPP_
