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

#include "dcs/network_sim.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "dcs/errors.hpp"

namespace dcs {

std::string violation_mode_name(ViolationMode m) {
  switch (m) {
    case ViolationMode::kLawful: return "lawful";
    case ViolationMode::kNoFairness: return "no-fairness";
    case ViolationMode::kNonSemilattice: return "non-semilattice";
    case ViolationMode::kDuplicateRid: return "duplicate-rid";
    case ViolationMode::kMutableParents: return "mutable-parents";
    case ViolationMode::kCausalForgery: return "causal-forgery";
  }
  return "?";
}

std::optional<ViolationMode> violation_mode_from_name(const std::string& name) {
  for (ViolationMode m :
       {ViolationMode::kLawful, ViolationMode::kNoFairness, ViolationMode::kNonSemilattice,
        ViolationMode::kDuplicateRid, ViolationMode::kMutableParents,
        ViolationMode::kCausalForgery}) {
    if (violation_mode_name(m) == name) return m;
  }
  return std::nullopt;
}

void NetworkConfig::validate() const {
  if (drop_probability < 0.0 || drop_probability > 1.0)
    throw ConfigError("drop probability out of [0,1]");
  if (duplicate_probability < 0.0 || duplicate_probability > 1.0)
    throw ConfigError("duplicate probability out of [0,1]");
  if (fairness_enabled && fairness_bound <= max_reorder_delay)
    throw ConfigError("fairness bound must exceed the max reorder delay");
  if (event_budget == 0) throw ConfigError("event budget must be positive");
}

std::string NetworkConfig::text() const {
  std::ostringstream os;
  os << "drop=" << drop_probability << " dup=" << duplicate_probability
     << " reorder=" << max_reorder_delay << " fairness=" << (fairness_enabled ? "on" : "off")
     << " bound=" << fairness_bound << " seed=" << seed << " budget=" << event_budget;
  if (!partition.empty()) {
    os << " block=";
    bool first = true;
    for (const auto& [from, to] : partition) {
      if (!first) os << ',';
      os << from << '-' << to;
      first = false;
    }
  }
  return os.str();
}

void apply_config_override(NetworkConfig& cfg, const std::string& key,
                           const std::string& value) {
  try {
    if (key == "drop") {
      cfg.drop_probability = std::stod(value);
    } else if (key == "dup") {
      cfg.duplicate_probability = std::stod(value);
    } else if (key == "reorder") {
      cfg.max_reorder_delay = std::stoull(value);
    } else if (key == "fairness") {
      if (value != "on" && value != "off") throw ConfigError("fairness must be on|off");
      cfg.fairness_enabled = (value == "on");
    } else if (key == "bound") {
      cfg.fairness_bound = std::stoull(value);
    } else if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "budget") {
      cfg.event_budget = std::stoull(value);
    } else if (key == "block") {
      std::istringstream in(value);
      std::string pair;
      while (std::getline(in, pair, ',')) {
        auto dash = pair.find('-');
        if (dash == std::string::npos) throw ConfigError("block needs from-to pairs");
        cfg.partition.emplace(static_cast<AgentId>(std::stoul(pair.substr(0, dash))),
                              static_cast<AgentId>(std::stoul(pair.substr(dash + 1))));
      }
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const DcsError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("bad value '" + value + "' for config key '" + key + "'");
  }
}

NetworkConfig scenario_config(const Scenario& s, uint64_t seed) {
  NetworkConfig cfg;
  for (const auto& [k, v] : s.config_overrides) apply_config_override(cfg, k, v);
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

std::map<std::string, SemilatticeValue> ExecutionRecord::expected_final_states() const {
  std::map<std::string, std::vector<SemilatticeValue>> by_key;
  for (const Contribution& c : created) by_key[c.key()].push_back(c.payload());
  std::map<std::string, SemilatticeValue> out;
  for (const auto& [key, space] : key_spaces.bindings()) {
    auto it = by_key.find(key);
    out.emplace(key, join_all(space, it == by_key.end() ? std::vector<SemilatticeValue>{}
                                                        : it->second));
  }
  return out;
}

bool ExecutionRecord::converged() const {
  auto expected = expected_final_states();
  for (const auto& [key, want] : expected) {
    for (const AgentState& a : agents) {
      if (!a.subscribed(key) || !is_live(a.id())) continue;
      if (!(a.state(key) == want)) return false;
    }
  }
  return true;
}

namespace {

struct Event {
  uint64_t tick = 0;
  uint64_t seq = 0;  // stable tie-break: push order
  enum class Kind { kCrash, kIntentGroup, kDelivery } kind = Kind::kDelivery;
  AgentId target = 0;
  size_t group = 0;
  std::shared_ptr<const Contribution> contribution;
  AgentId sender = 0;
  bool guaranteed = false;
};

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.tick != b.tick) return a.tick > b.tick;
    return a.seq > b.seq;
  }
};

struct Sim {
  const Scenario& scn;
  NetworkConfig cfg;
  RunOptions opts;
  std::shared_ptr<const OperationalPolicy> policy;

  std::vector<AgentState> agents;
  std::set<AgentId> crashed;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue;
  uint64_t next_seq = 0;
  std::map<std::pair<AgentId, AgentId>, DetRng> channels;
  DetRng policy_rng;
  std::vector<std::vector<size_t>> groups;  // intent indices per (tick, agent) burst
  std::vector<std::optional<Rid>> intent_rids;
  std::map<AgentId, uint64_t> forged_seq;
  std::map<AgentId, RidSet> delivered;  // network-level deliveries per agent

  ExecutionRecord rec;
  bool aborted = false;

  Sim(const Scenario& s, const NetworkConfig& c, const RunOptions& o)
      : scn(s), cfg(c), opts(o), policy_rng(mix_u64({c.seed, 0x90115EULL})) {
    policy = o.policy ? o.policy : make_policy(s.policy_spec);
    for (AgentId a = 1; a <= s.n_agents; ++a) {
      std::set<std::string> subs;
      for (const auto& [key, _] : s.key_spaces.bindings())
        if (s.relevant(key).count(a) != 0) subs.insert(key);
      agents.emplace_back(a, std::move(subs), s.key_spaces);
    }
    intent_rids.assign(s.intents.size(), std::nullopt);
    rec.scenario_name = s.name;
    rec.config = c;
    rec.mode = o.mode;
    rec.policy_tag = policy->tag();
    rec.key_spaces = s.key_spaces;
  }

  bool metadata_enforced() const {
    return opts.mode == ViolationMode::kLawful || opts.mode == ViolationMode::kNoFairness ||
           opts.mode == ViolationMode::kNonSemilattice;
  }

  DetRng& channel(AgentId from, AgentId to) {
    auto it = channels.find({from, to});
    if (it == channels.end())
      it = channels.emplace(std::make_pair(from, to), DetRng(mix_u64({cfg.seed, from, to})))
               .first;
    return it->second;
  }

  void push(Event e) {
    e.seq = next_seq++;
    queue.push(std::move(e));
  }

  void trace(const std::string& line) { rec.trace.push_back(line); }

  void init_events() {
    for (const auto& [agent, tick] : scn.crash_ticks)
      push(Event{tick, 0, Event::Kind::kCrash, agent, 0, nullptr, 0, false});

    // One event per (tick, agent) burst, preserving file order inside it.
    std::map<std::pair<uint64_t, AgentId>, size_t> group_of;
    for (size_t i = 0; i < scn.intents.size(); ++i) {
      const ScenarioIntent& in = scn.intents[i];
      auto key = std::make_pair(in.tick, in.agent);
      auto it = group_of.find(key);
      if (it == group_of.end()) {
        group_of.emplace(key, groups.size());
        groups.push_back({i});
        push(Event{in.tick, 0, Event::Kind::kIntentGroup, in.agent, groups.size() - 1,
                   nullptr, 0, false});
      } else {
        groups[it->second].push_back(i);
      }
    }
  }

  RidSet resolve_refs(const std::vector<size_t>& refs, bool* complete) const {
    RidSet out;
    *complete = true;
    for (size_t r : refs) {
      if (intent_rids[r].has_value())
        out.insert(*intent_rids[r]);
      else
        *complete = false;
    }
    return out;
  }

  void exec_intent(size_t idx, uint64_t tick, std::vector<Contribution>& outbox) {
    const ScenarioIntent& in = scn.intents[idx];
    AgentState& agent = agents[in.agent - 1];

    std::optional<Contribution> c;
    if (in.forged_rid.has_value()) {
      RidSet parents;
      if (in.forged_parent_rids.has_value()) {
        parents = *in.forged_parent_rids;
      } else if (in.parents.kind == ParentRuleKind::kFirstObservedOf) {
        bool complete = false;
        RidSet candidates = resolve_refs(in.parents.intent_refs, &complete);
        for (const Rid& seen : agent.observation_order()) {
          if (candidates.count(seen) != 0) {
            parents.insert(seen);
            break;
          }
        }
      }
      c = Contribution::forge(*in.forged_rid, in.agent, forged_seq[in.agent]++, in.key,
                              std::move(parents), in.payload);
      ReceiveOutcome out = agent.receive(*c, /*enforce_digest=*/false);
      if (out.status == ReceiveStatus::kCycleRejected) rec.cycle_detected = true;
      if (out.status == ReceiveStatus::kCollision) rec.ill_defined = true;
    } else {
      ParentRule rule;
      switch (in.parents.kind) {
        case ParentRuleKind::kEmpty:
          rule = ParentRule::empty();
          break;
        case ParentRuleKind::kFrontier:
          rule = ParentRule::frontier();
          break;
        case ParentRuleKind::kExplicit: {
          bool complete = false;
          RidSet rids = resolve_refs(in.parents.intent_refs, &complete);
          if (!complete) {
            // A referenced contribution was never created (its creator
            // crashed); the intent cannot be realized lawfully.
            trace("t=" + std::to_string(tick) + " agent=" + std::to_string(in.agent) +
                  " skip intent=" + std::to_string(idx + 1) + " reason=unresolved-parent");
            return;
          }
          rule = ParentRule::explicit_rids(std::move(rids));
          break;
        }
        case ParentRuleKind::kFirstObservedOf: {
          bool complete = false;
          RidSet rids = resolve_refs(in.parents.intent_refs, &complete);
          rule = ParentRule::first_observed_of({rids.begin(), rids.end()});
          break;
        }
      }
      c = agent.contribute(in.key, in.payload, rule);
    }

    intent_rids[idx] = c->rid();
    rec.created.push_back(*c);
    trace("t=" + std::to_string(tick) + " agent=" + std::to_string(in.agent) +
          " create rid=" + c->rid().short_hex() + " key=" + in.key +
          " parents=" + std::to_string(c->parents().size()));
    delivered[in.agent].insert(c->rid());
    outbox.push_back(std::move(*c));
  }

  void broadcast(const Contribution& c, uint64_t base_tick, size_t intent_idx) {
    const ScenarioIntent& in = scn.intents[intent_idx];
    auto sp = std::make_shared<const Contribution>(c);
    std::set<AgentId> recipients = scn.relevant(c.key());
    recipients.erase(in.agent);

    for (AgentId r : recipients) {
      auto scripted = in.scripted_delays.find(r);
      if (scripted != in.scripted_delays.end()) {
        uint64_t delay = (cfg.seed & 1) == 0 ? scripted->second.first : scripted->second.second;
        push(Event{base_tick + delay, 0, Event::Kind::kDelivery, r, 0, sp, in.agent, true});
        continue;
      }

      bool blocked = cfg.partition.count({in.agent, r}) != 0;
      if (blocked) {
        trace("t=" + std::to_string(base_tick) + " agent=" + std::to_string(in.agent) +
              " blocked rid=" + c.rid().short_hex() + " to=" + std::to_string(r));
      } else {
        DetRng& ch = channel(in.agent, r);
        if (!ch.bernoulli(cfg.drop_probability)) {
          int copies = 1;
          while (copies <= NetworkConfig::kMaxDuplicates &&
                 ch.bernoulli(cfg.duplicate_probability))
            copies++;
          for (int i = 0; i < copies; ++i) {
            uint64_t delay = 1 + ch.uniform(0, cfg.max_reorder_delay);
            push(Event{base_tick + delay, 0, Event::Kind::kDelivery, r, 0, sp, in.agent,
                       false});
          }
        } else {
          trace("t=" + std::to_string(base_tick) + " agent=" + std::to_string(in.agent) +
                " drop rid=" + c.rid().short_hex() + " to=" + std::to_string(r));
        }
      }

      // Weak fairness: a persistently sent record is forcibly delivered by
      // the horizon, partitions and drops notwithstanding.
      if (cfg.fairness_enabled) {
        push(Event{base_tick + cfg.fairness_bound, 0, Event::Kind::kDelivery, r, 0, sp,
                   in.agent, true});
      }
    }
  }

  void exec_group(const Event& ev) {
    if (crashed.count(ev.target) != 0) {
      trace("t=" + std::to_string(ev.tick) + " agent=" + std::to_string(ev.target) +
            " skip-group reason=crashed");
      return;
    }
    std::vector<Contribution> outbox;
    for (size_t idx : groups[ev.group]) exec_intent(idx, ev.tick, outbox);
    if (outbox.empty()) return;

    auto batches = apply_policy(*policy, outbox, policy_rng);
    std::map<Rid, size_t> intent_of;
    for (size_t idx : groups[ev.group])
      if (intent_rids[idx].has_value()) intent_of[*intent_rids[idx]] = idx;
    for (size_t j = 0; j < batches.size(); ++j) {
      for (const Contribution& c : batches[j])
        broadcast(c, ev.tick + j, intent_of.at(c.rid()));
    }
  }

  void exec_delivery(const Event& ev) {
    if (crashed.count(ev.target) != 0) {
      trace("t=" + std::to_string(ev.tick) + " agent=" + std::to_string(ev.target) +
            " dead-drop rid=" + ev.contribution->rid().short_hex());
      return;
    }
    delivered[ev.target].insert(ev.contribution->rid());
    ReceiveOutcome out = agents[ev.target - 1].receive(*ev.contribution, metadata_enforced());
    const char* status = "?";
    switch (out.status) {
      case ReceiveStatus::kApplied: status = "applied"; break;
      case ReceiveStatus::kBuffered: status = "buffered"; break;
      case ReceiveStatus::kDuplicate: status = "duplicate"; break;
      case ReceiveStatus::kCollision: status = "collision"; break;
      case ReceiveStatus::kDigestRejected: status = "digest-rejected"; break;
      case ReceiveStatus::kCycleRejected: status = "cycle-rejected"; break;
    }
    trace("t=" + std::to_string(ev.tick) + " agent=" + std::to_string(ev.target) +
          " recv rid=" + ev.contribution->rid().short_hex() + " from=" +
          std::to_string(ev.sender) + " status=" + std::string(status) +
          (ev.guaranteed ? " guaranteed" : ""));

    switch (out.status) {
      case ReceiveStatus::kCollision:
      case ReceiveStatus::kDigestRejected:
        if (metadata_enforced()) {
          // A lawful run cannot reconcile two histories claiming one rid; the
          // whole run is marked structurally ambiguous.
          rec.structural_ambiguity = true;
          rec.note = "aborted: " + out.detail;
          aborted = true;
        } else {
          rec.ill_defined = true;
        }
        break;
      case ReceiveStatus::kCycleRejected:
        rec.cycle_detected = true;
        break;
      default:
        break;
    }
  }

  ExecutionRecord run() {
    init_events();
    uint64_t processed = 0;
    while (!queue.empty() && !aborted) {
      if (processed++ >= cfg.event_budget) {
        rec.quiescent = false;
        rec.note = "event budget exceeded";
        break;
      }
      Event ev = queue.top();
      queue.pop();
      switch (ev.kind) {
        case Event::Kind::kCrash:
          crashed.insert(ev.target);
          trace("t=" + std::to_string(ev.tick) + " agent=" + std::to_string(ev.target) +
                " crash");
          break;
        case Event::Kind::kIntentGroup:
          exec_group(ev);
          break;
        case Event::Kind::kDelivery:
          exec_delivery(ev);
          break;
      }
    }

    if (cfg.fairness_enabled && !aborted && rec.quiescent) {
      for (const Contribution& c : rec.created) {
        for (AgentId r : scn.relevant(c.key())) {
          if (crashed.count(r) != 0) continue;
          if (delivered[r].count(c.rid()) == 0) rec.fairness_delivery_ok = false;
        }
      }
    }

    for (const Contribution& c : rec.created) {
      try {
        rec.global_dag.insert(c);
      } catch (const RidCollision& e) {
        rec.ill_defined = true;
        if (rec.note.empty()) rec.note = e.what();
      } catch (const CycleDetected& e) {
        rec.cycle_detected = true;
        if (rec.note.empty()) rec.note = e.what();
      }
    }

    rec.agents = std::move(agents);
    rec.crashed = std::move(crashed);
    std::string joined;
    for (const std::string& line : rec.trace) {
      joined += line;
      joined += '\n';
    }
    rec.trace_digest = digest_hex(sha256(joined));
    return std::move(rec);
  }
};

}  // namespace

ExecutionRecord run_simulation(const Scenario& scenario, const NetworkConfig& config,
                               const RunOptions& options) {
  scenario.validate();
  config.validate();
  Sim sim(scenario, config, options);
  return sim.run();
}

ExecutionRecord run_simulation(const Scenario& scenario, uint64_t seed,
                               const RunOptions& options) {
  return run_simulation(scenario, scenario_config(scenario, seed), options);
}

}  // namespace dcs
