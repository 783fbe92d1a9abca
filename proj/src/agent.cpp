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

#include "dcs/agent.hpp"

#include <algorithm>

#include "dcs/errors.hpp"

namespace dcs {

AgentState::AgentState(AgentId id, std::set<std::string> subscriptions, KeySpaces spaces)
    : id_(id), subscriptions_(std::move(subscriptions)), spaces_(std::move(spaces)) {
  for (const std::string& k : subscriptions_) spaces_.space_for(k);  // must be bound
}

const Contribution* AgentState::find_observed(const Rid& r) const {
  if (dag_.contains(r)) return &dag_.at(r);
  for (const Contribution& c : dag_.pending().pending)
    if (c.rid() == r) return &c;
  return nullptr;
}

void AgentState::merge_payload(const Contribution& c) {
  const std::string& space = spaces_.space_for(c.key());
  auto it = state_.find(c.key());
  if (it == state_.end()) {
    const SemilatticeValue& bottom = StateSpaceRegistry::builtin().space(space).bottom;
    it = state_.emplace(c.key(), bottom).first;
  }
  it->second = join(it->second, c.payload());
}

ReceiveOutcome AgentState::receive(const Contribution& c, bool enforce_digest) {
  if (!subscribed(c.key()))
    throw NotSubscribed("agent " + std::to_string(id_) + " does not subscribe to '" +
                        c.key() + "'");
  if (c.payload().space() != spaces_.space_for(c.key()))
    throw StateSpaceMismatch("delivered payload space '" + c.payload().space() +
                             "' does not match key '" + c.key() + "'");

  if (enforce_digest) {
    Rid expected = Contribution::compute_rid(c.creator(), c.creator_seq(), c.key(),
                                             c.parents(), c.payload());
    if (expected != c.rid()) {
      conflicts_.push_back("digest mismatch on " + c.rid().short_hex());
      return {ReceiveStatus::kDigestRejected, "rid does not match content digest"};
    }
  }

  if (observed_.count(c.rid()) != 0) {
    const Contribution* have = find_observed(c.rid());
    if (have != nullptr && !(*have == c)) {
      conflicts_.push_back("rid collision on " + c.rid().short_hex());
      return {ReceiveStatus::kCollision,
              "rid " + c.rid().short_hex() + " already observed with different content"};
    }
    return {ReceiveStatus::kDuplicate, ""};
  }

  InsertOutcome inserted;
  try {
    inserted = dag_.insert(c);
  } catch (const CycleDetected& e) {
    conflicts_.push_back(e.what());
    return {ReceiveStatus::kCycleRejected, e.what()};
  }

  observed_.insert(c.rid());
  observation_order_.push_back(c.rid());
  merge_payload(c);
  return {inserted == InsertOutcome::kBuffered ? ReceiveStatus::kBuffered
                                               : ReceiveStatus::kApplied,
          ""};
}

Contribution AgentState::contribute(const std::string& key, SemilatticeValue payload,
                                    const ParentRule& rule) {
  if (!subscribed(key))
    throw NotSubscribed("agent " + std::to_string(id_) + " does not subscribe to '" +
                        key + "'");
  RidSet parents;
  switch (rule.kind) {
    case ParentRuleKind::kEmpty:
      break;
    case ParentRuleKind::kFrontier:
      parents = local_frontier(key);
      break;
    case ParentRuleKind::kExplicit:
      parents = rule.explicit_parents;
      break;
    case ParentRuleKind::kFirstObservedOf: {
      // Arrival order decides; this is what makes the metadata-mutation race
      // schedule-dependent.
      for (const Rid& seen : observation_order_) {
        if (std::find(rule.candidates.begin(), rule.candidates.end(), seen) !=
            rule.candidates.end()) {
          parents.insert(seen);
          break;
        }
      }
      break;
    }
  }
  Contribution c =
      make_contribution(id_, next_seq_, key, parents, std::move(payload), observed_, spaces_);
  next_seq_++;
  receive(c);
  return c;
}

RidSet AgentState::local_frontier(const std::string& key) const {
  if (!subscribed(key))
    throw NotSubscribed("agent " + std::to_string(id_) + " does not subscribe to '" +
                        key + "'");

  // Observed records, applied or still buffered.
  std::map<Rid, const Contribution*> view;
  for (const auto& [rid, c] : dag_.vertices()) view.emplace(rid, &c);
  DagDelta delta = dag_.pending();
  for (const Contribution& c : delta.pending) view.emplace(c.rid(), &c);

  // Mark every ancestor of a key-k record; what stays unmarked is the
  // frontier.
  RidSet has_key_descendant;
  for (const auto& [rid, c] : view) {
    if (c->key() != key) continue;
    std::vector<Rid> stack(c->parents().begin(), c->parents().end());
    while (!stack.empty()) {
      Rid cur = stack.back();
      stack.pop_back();
      if (!has_key_descendant.insert(cur).second) continue;
      auto it = view.find(cur);
      if (it == view.end()) continue;
      for (const Rid& p : it->second->parents()) stack.push_back(p);
    }
  }

  RidSet frontier;
  for (const auto& [rid, c] : view) {
    if (c->key() == key && has_key_descendant.count(rid) == 0) frontier.insert(rid);
  }
  return frontier;
}

const SemilatticeValue& AgentState::state(const std::string& key) const {
  auto it = state_.find(key);
  if (it != state_.end()) return it->second;
  return StateSpaceRegistry::builtin().space(spaces_.space_for(key)).bottom;
}

std::vector<SemilatticeValue> AgentState::observed_payloads(const std::string& key) const {
  std::vector<SemilatticeValue> out;
  for (const auto& [rid, c] : dag_.vertices())
    if (c.key() == key) out.push_back(c.payload());
  for (const Contribution& c : dag_.pending().pending)
    if (c.key() == key) out.push_back(c.payload());
  return out;
}

}  // namespace dcs
