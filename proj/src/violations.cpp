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

#include "dcs/violations.hpp"

#include <sstream>

#include "dcs/errors.hpp"

namespace dcs {

std::string ambiguity_class_name(AmbiguityClass c) {
  switch (c) {
    case AmbiguityClass::kNone: return "none";
    case AmbiguityClass::kStructuralAmbiguity: return "structural-ambiguity";
    case AmbiguityClass::kValueDivergence: return "value-divergence";
    case AmbiguityClass::kIllDefinedGraph: return "ill-defined-graph";
    case AmbiguityClass::kCycleDetected: return "cycle-detected";
  }
  return "?";
}

Rid fig3_shared_rid() { return Rid{sha256(std::string_view("violation:fig3:rid7"))}; }

Rid fig5_rid(int which) {
  return Rid{sha256("violation:fig5:r" + std::to_string(which))};
}

namespace {

// Lawful control: scripted cross-agent chains over a lossy reordering
// network. The contribution set is seed-independent, so Theorem 1 pins the
// resulting history regardless of scheduling.
Scenario lawful_control_scenario() {
  Scenario s;
  s.name = "lawful-control";
  s.n_agents = 3;
  s.key_spaces.bind("k", kGSetTag);
  auto g = [](std::string e) { return SemilatticeValue::gset({std::move(e)}); };
  s.intents.push_back({1, 1, "k", g("a"), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back({1, 2, "k", g("b"), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back({20, 3, "k", g("c"), ParentSpec::explicit_intents({0, 1}), {}, {}, {}});
  s.intents.push_back({40, 1, "k", g("d"), ParentSpec::explicit_intents({2}), {}, {}, {}});
  s.config_overrides["drop"] = "0.4";
  s.config_overrides["dup"] = "0.4";
  s.config_overrides["reorder"] = "4";
  s.config_overrides["bound"] = "12";
  s.validate();
  return s;
}

// Axiom 1 off: a three-agent run where the network never lets agent 2 see
// the only record. Deterministic, matching the figure's dashed arrow.
Scenario no_fairness_scenario() {
  Scenario s = fig1_partition_scenario();
  s.name = "violation-no-fairness";
  return s;
}

// Axiom 2 off: two overwrite-register writes race into every store; the
// scripted delays realize schedule A on even seeds and schedule B on odd
// seeds.
Scenario non_semilattice_scenario() {
  Scenario s;
  s.name = "violation-non-semilattice";
  s.n_agents = 3;
  s.key_spaces.bind("S", kOverwriteTag);
  ScenarioIntent d1{1, 1, "S", SemilatticeValue::overwrite(1), ParentSpec::empty(), {}, {}, {}};
  d1.scripted_delays[2] = {1, 4};
  d1.scripted_delays[3] = {1, 4};
  ScenarioIntent d2{1, 2, "S", SemilatticeValue::overwrite(2), ParentSpec::empty(), {}, {}, {}};
  d2.scripted_delays[1] = {4, 1};
  d2.scripted_delays[3] = {4, 1};
  s.intents.push_back(std::move(d1));
  s.intents.push_back(std::move(d2));
  s.config_overrides["bound"] = "10";
  s.validate();
  return s;
}

// Axiom 3 off: two different records claim one rid; the scripted delays flip
// which version agent 3 accepts first.
Scenario duplicate_rid_scenario() {
  Scenario s;
  s.name = "violation-duplicate-rid";
  s.n_agents = 3;
  s.key_spaces.bind("k", kGSetTag);
  ScenarioIntent a{1, 1, "k", SemilatticeValue::gset({"data_A"}), ParentSpec::empty(), {}, {}, {}};
  a.forged_rid = fig3_shared_rid();
  a.forged_parent_rids = RidSet{};
  a.scripted_delays[2] = {1, 4};
  a.scripted_delays[3] = {1, 4};
  ScenarioIntent b{1, 2, "k", SemilatticeValue::gset({"data_B"}), ParentSpec::empty(), {}, {}, {}};
  b.forged_rid = fig3_shared_rid();
  b.forged_parent_rids = RidSet{};
  b.scripted_delays[1] = {4, 1};
  b.scripted_delays[3] = {4, 1};
  s.intents.push_back(std::move(a));
  s.intents.push_back(std::move(b));
  s.config_overrides["bound"] = "10";
  s.validate();
  return s;
}

// Axiom 4 off: agents 1 and 2 publish roots p and q; agent 3's record keeps
// one fixed rid while naming whichever root arrived first as parent, so the
// two runs disagree on the edge set.
Scenario mutable_parents_scenario() {
  Scenario s;
  s.name = "violation-mutable-parents";
  s.n_agents = 3;
  s.key_spaces.bind("k", kGSetTag);
  ScenarioIntent p{1, 1, "k", SemilatticeValue::gset({"p"}), ParentSpec::empty(), {}, {}, {}};
  p.scripted_delays[2] = {1, 1};
  p.scripted_delays[3] = {1, 4};
  ScenarioIntent q{1, 2, "k", SemilatticeValue::gset({"q"}), ParentSpec::empty(), {}, {}, {}};
  q.scripted_delays[1] = {1, 1};
  q.scripted_delays[3] = {4, 1};
  ScenarioIntent r{10, 3, "k", SemilatticeValue::gset({"r"}),
                   ParentSpec::first_observed_of({0, 1}), {}, {}, {}};
  // The rid stays what it was before the parents were rewritten: the digest
  // of the record with no parents at all.
  r.forged_rid = Contribution::compute_rid(3, 0, "k", {}, SemilatticeValue::gset({"r"}));
  s.intents.push_back(std::move(p));
  s.intents.push_back(std::move(q));
  s.intents.push_back(std::move(r));
  s.config_overrides["bound"] = "20";
  s.validate();
  return s;
}

// Axiom 5 off: two records name each other as parents.
Scenario causal_forgery_scenario() {
  Scenario s;
  s.name = "violation-causal-forgery";
  s.n_agents = 2;
  s.key_spaces.bind("k", kGSetTag);
  ScenarioIntent r1{1, 1, "k", SemilatticeValue::gset({"r1"}), ParentSpec::empty(), {}, {}, {}};
  r1.forged_rid = fig5_rid(1);
  r1.forged_parent_rids = RidSet{fig5_rid(2)};
  ScenarioIntent r2{2, 2, "k", SemilatticeValue::gset({"r2"}), ParentSpec::empty(), {}, {}, {}};
  r2.forged_rid = fig5_rid(2);
  r2.forged_parent_rids = RidSet{fig5_rid(1)};
  s.intents.push_back(std::move(r1));
  s.intents.push_back(std::move(r2));
  s.config_overrides["bound"] = "10";
  s.validate();
  return s;
}

// Per-key final states of the live relevant agents, for the value-divergence
// judgment.
std::vector<std::string> live_state_rows(const ExecutionRecord& rec) {
  std::vector<std::string> rows;
  for (const AgentState& a : rec.agents) {
    if (!rec.is_live(a.id())) continue;
    for (const auto& [key, _] : rec.key_spaces.bindings()) {
      if (!a.subscribed(key)) continue;
      rows.push_back("agent" + std::to_string(a.id()) + " " + key + "=" +
                     print_value(a.state(key)));
    }
  }
  return rows;
}

bool values_consistent(const ExecutionRecord& a, const ExecutionRecord& b) {
  return a.converged() && b.converged() &&
         a.expected_final_states() == b.expected_final_states() &&
         live_state_rows(a) == live_state_rows(b);
}

}  // namespace

Scenario canonical_violation_scenario(ViolationMode mode) {
  switch (mode) {
    case ViolationMode::kLawful: return lawful_control_scenario();
    case ViolationMode::kNoFairness: return no_fairness_scenario();
    case ViolationMode::kNonSemilattice: return non_semilattice_scenario();
    case ViolationMode::kDuplicateRid: return duplicate_rid_scenario();
    case ViolationMode::kMutableParents: return mutable_parents_scenario();
    case ViolationMode::kCausalForgery: return causal_forgery_scenario();
  }
  throw ConfigError("unknown violation mode");
}

AmbiguityVerdict run_violation(ViolationMode mode, const Scenario& scenario,
                               std::pair<uint64_t, uint64_t> seeds) {
  RunOptions opts;
  opts.mode = mode;
  AmbiguityVerdict v;
  v.mode = mode;
  v.run_a = run_simulation(scenario, seeds.first, opts);
  v.run_b = run_simulation(scenario, seeds.second, opts);

  v.isomorphic_dags = isomorphic(v.run_a.global_dag, v.run_b.global_dag).isomorphic;
  bool cycle = v.run_a.cycle_detected || v.run_b.cycle_detected;
  bool ill = v.run_a.ill_defined || v.run_b.ill_defined || v.run_a.structural_ambiguity ||
             v.run_b.structural_ambiguity;
  bool values_ok = values_consistent(v.run_a, v.run_b);

  std::ostringstream detail;
  if (cycle) {
    v.cls = AmbiguityClass::kCycleDetected;
    detail << "history contains a forged cycle";
  } else if (ill) {
    v.cls = AmbiguityClass::kIllDefinedGraph;
    detail << "one rid claimed by different records";
  } else if (!v.isomorphic_dags) {
    v.cls = AmbiguityClass::kStructuralAmbiguity;
    detail << "replays produced non-isomorphic histories";
  } else if (!values_ok) {
    v.cls = AmbiguityClass::kValueDivergence;
    detail << "relevant agents' final states disagree:";
    for (const auto& row : live_state_rows(v.run_a)) detail << " A[" << row << "]";
    for (const auto& row : live_state_rows(v.run_b)) detail << " B[" << row << "]";
  } else {
    v.cls = AmbiguityClass::kNone;
    detail << "replays agree";
  }
  v.ambiguous = v.cls != AmbiguityClass::kNone;
  v.detail = detail.str();
  return v;
}

AmbiguityVerdict run_violation(ViolationMode mode, std::pair<uint64_t, uint64_t> seeds) {
  return run_violation(mode, canonical_violation_scenario(mode), seeds);
}

double ambiguity_rate(ViolationMode mode, const Scenario& scenario, uint32_t trials,
                      uint64_t seed_stream) {
  if (trials == 0) throw ConfigError("ambiguity rate needs at least one trial");
  uint64_t sm = seed_stream;
  uint32_t ambiguous = 0;
  for (uint32_t t = 0; t < trials; ++t) {
    // Parity-split pair: the scripted races resolve one way on the even seed
    // and the other way on the odd seed.
    uint64_t base = splitmix64(sm);
    uint64_t s1 = base * 2;
    uint64_t s2 = base * 2 + 1;
    if (run_violation(mode, scenario, {s1, s2}).ambiguous) ambiguous++;
  }
  return static_cast<double>(ambiguous) / static_cast<double>(trials);
}

std::vector<AmbiguityTableRow> ambiguity_table(uint32_t trials, uint64_t seed_stream) {
  std::vector<AmbiguityTableRow> rows;
  auto rate = [&](ViolationMode m) {
    return ambiguity_rate(m, canonical_violation_scenario(m), trials, seed_stream);
  };
  rows.push_back({"DCS (baseline)", "none", rate(ViolationMode::kLawful), false});
  rows.push_back({"Non-DCS control", "weak fairness (axiom 1)",
                  rate(ViolationMode::kNoFairness), true});
  rows.push_back({"Non-DCS control", "join-semilattice (axiom 2)",
                  rate(ViolationMode::kNonSemilattice), true});
  rows.push_back({"Non-DCS control", "rid uniqueness (axiom 3)",
                  rate(ViolationMode::kDuplicateRid), true});
  rows.push_back({"Non-DCS control", "metadata mutability (axiom 4)",
                  rate(ViolationMode::kMutableParents), false});
  rows.push_back({"Non-DCS control", "causal forgery (axiom 5)",
                  rate(ViolationMode::kCausalForgery), false});
  return rows;
}

}  // namespace dcs
