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

#ifndef DCS_AGENT_HPP_
#define DCS_AGENT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "dcs/provenance_dag.hpp"

namespace dcs {

enum class ReceiveStatus {
  kApplied,         // inserted into the local graph, payload merged
  kBuffered,        // parents missing; merged, graph insert deferred
  kDuplicate,       // already observed; state untouched
  kCollision,       // rid observed with different content; first version kept
  kDigestRejected,  // claimed rid does not match the record's digest
  kCycleRejected,   // insert would close a cycle; record dropped
};

struct ReceiveOutcome {
  ReceiveStatus status = ReceiveStatus::kApplied;
  std::string detail;
};

enum class ParentRuleKind {
  kEmpty,            // no parents; a root contribution
  kFrontier,         // maximal observed antichain for the key
  kExplicit,         // caller-supplied rids
  kFirstObservedOf,  // whichever candidate arrived first (violation scenarios)
};

struct ParentRule {
  ParentRuleKind kind = ParentRuleKind::kFrontier;
  RidSet explicit_parents;
  std::vector<Rid> candidates;

  static ParentRule empty() { return {ParentRuleKind::kEmpty, {}, {}}; }
  static ParentRule frontier() { return {ParentRuleKind::kFrontier, {}, {}}; }
  static ParentRule explicit_rids(RidSet rids) {
    return {ParentRuleKind::kExplicit, std::move(rids), {}};
  }
  static ParentRule first_observed_of(std::vector<Rid> rids) {
    return {ParentRuleKind::kFirstObservedOf, {}, std::move(rids)};
  }
};

// Per-agent view: observed rids, local graph fragment, and the per-key
// merged state. The merged state is always the join of every observed
// payload for the key, so it is monotone non-decreasing over the agent's
// lifetime.
class AgentState {
 public:
  AgentState(AgentId id, std::set<std::string> subscriptions, KeySpaces spaces);

  AgentId id() const { return id_; }
  bool subscribed(const std::string& key) const { return subscriptions_.count(key) != 0; }
  const std::set<std::string>& subscriptions() const { return subscriptions_; }

  // Validates, merges and records a delivered contribution. Duplicate
  // deliveries of an observed rid leave the state untouched. With
  // enforce_digest off (metadata-mutation experiments) a stale rid is
  // accepted as-is.
  ReceiveOutcome receive(const Contribution& c, bool enforce_digest = true);

  // Creates a contribution under the causal well-formedness rule: parents
  // are drawn from what this agent has already observed. The new record is
  // self-received immediately.
  Contribution contribute(const std::string& key, SemilatticeValue payload,
                          const ParentRule& rule);

  // Observed key-k contributions with no observed key-k descendant.
  RidSet local_frontier(const std::string& key) const;

  const SemilatticeValue& state(const std::string& key) const;
  const std::map<std::string, SemilatticeValue>& local_state() const { return state_; }
  const ProvenanceDag& local_dag() const { return dag_; }
  const RidSet& observed() const { return observed_; }
  const std::vector<Rid>& observation_order() const { return observation_order_; }
  uint64_t next_seq() const { return next_seq_; }

  // Payloads of observed contributions for a key, for recomputing the merged
  // state from scratch in checks.
  std::vector<SemilatticeValue> observed_payloads(const std::string& key) const;

  const std::vector<std::string>& conflicts() const { return conflicts_; }

 private:
  const Contribution* find_observed(const Rid& r) const;
  void merge_payload(const Contribution& c);

  AgentId id_;
  std::set<std::string> subscriptions_;
  KeySpaces spaces_;
  RidSet observed_;
  std::vector<Rid> observation_order_;
  ProvenanceDag dag_;
  std::map<std::string, SemilatticeValue> state_;
  uint64_t next_seq_ = 0;
  std::vector<std::string> conflicts_;  // rid collisions / cycle rejections seen
};

}  // namespace dcs

#endif  // DCS_AGENT_HPP_
