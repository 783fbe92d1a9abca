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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcs/violations.hpp"
#include "test_support.hpp"

using namespace dcs;

TEST_CASE("lawful control: replays agree for any seed pair") {
  AmbiguityVerdict v = run_violation(ViolationMode::kLawful, {2, 3});
  CHECK(v.cls == AmbiguityClass::kNone);
  CHECK_FALSE(v.ambiguous);
  CHECK(v.isomorphic_dags);
  CHECK(v.run_a.converged());
  CHECK(v.run_b.converged());
}

TEST_CASE("no-fairness: permanently divergent states (value divergence)") {
  AmbiguityVerdict v = run_violation(ViolationMode::kNoFairness, {2, 3});
  CHECK(v.cls == AmbiguityClass::kValueDivergence);
  CHECK(v.ambiguous);
  // One relevant agent holds the payload, the isolated one holds bottom.
  CHECK(v.run_a.agent(1).state("k") == SemilatticeValue::gset({"a_r"}));
  CHECK(v.run_a.agent(2).state("k") == SemilatticeValue::gset({}));
}

TEST_CASE("non-semilattice: the two schedules end at S=2 and S=1") {
  AmbiguityVerdict v = run_violation(ViolationMode::kNonSemilattice, {2, 3});
  CHECK(v.cls == AmbiguityClass::kValueDivergence);
  CHECK(v.ambiguous);
  // Observer agent 3 applies delta1 then delta2 on the even seed, the
  // reverse on the odd seed.
  CHECK(v.run_a.agent(3).state("S") == SemilatticeValue::overwrite(2));
  CHECK(v.run_b.agent(3).state("S") == SemilatticeValue::overwrite(1));
}

TEST_CASE("duplicate rid: the graph is ill-defined in every run") {
  AmbiguityVerdict v = run_violation(ViolationMode::kDuplicateRid, {2, 3});
  CHECK(v.cls == AmbiguityClass::kIllDefinedGraph);
  CHECK(v.ambiguous);
  CHECK(v.run_a.ill_defined);
  CHECK(v.run_b.ill_defined);
  // Agent 3 could not reconcile the two claimants.
  CHECK_FALSE(v.run_a.agent(3).conflicts().empty());
}

TEST_CASE("mutable parents: non-isomorphic histories (structural ambiguity)") {
  AmbiguityVerdict v = run_violation(ViolationMode::kMutableParents, {2, 3});
  CHECK(v.cls == AmbiguityClass::kStructuralAmbiguity);
  CHECK(v.ambiguous);
  CHECK_FALSE(v.isomorphic_dags);

  // The same rid carries different parent edges in the two runs.
  Scenario scn = canonical_violation_scenario(ViolationMode::kMutableParents);
  const Rid r = *scn.intents[2].forged_rid;
  REQUIRE(v.run_a.global_dag.contains(r));
  REQUIRE(v.run_b.global_dag.contains(r));
  CHECK(v.run_a.global_dag.at(r).parents() != v.run_b.global_dag.at(r).parents());
}

TEST_CASE("causal forgery: the forged pair closes a cycle") {
  AmbiguityVerdict v = run_violation(ViolationMode::kCausalForgery, {2, 3});
  CHECK(v.cls == AmbiguityClass::kCycleDetected);
  CHECK(v.ambiguous);
  CHECK(v.run_a.cycle_detected);
  CHECK(v.run_b.cycle_detected);
}

TEST_CASE("ambiguity rates: lawful 0, violations 1, at small trial counts") {
  CHECK(ambiguity_rate(ViolationMode::kLawful,
                       canonical_violation_scenario(ViolationMode::kLawful), 10, 999) == 0.0);
  CHECK(ambiguity_rate(ViolationMode::kMutableParents,
                       canonical_violation_scenario(ViolationMode::kMutableParents), 10,
                       999) == 1.0);
  CHECK(ambiguity_rate(ViolationMode::kCausalForgery,
                       canonical_violation_scenario(ViolationMode::kCausalForgery), 10,
                       999) == 1.0);
  CHECK_THROWS_AS(ambiguity_rate(ViolationMode::kLawful,
                                 canonical_violation_scenario(ViolationMode::kLawful), 0, 1),
                  ConfigError);
}

TEST_CASE("the ambiguity table carries the expected rows") {
  auto rows = ambiguity_table(5, 77);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].rate == 0.0);  // baseline
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].rate == 1.0);
  // The paper's table reports axioms 4 and 5; the other rows are artifact
  // extensions and say so.
  CHECK_FALSE(rows[4].extension);
  CHECK_FALSE(rows[5].extension);
  CHECK(rows[1].extension);
  CHECK(rows[2].extension);
  CHECK(rows[3].extension);
}

TEST_CASE("a digest mismatch in a lawful run aborts with a structural-ambiguity verdict") {
  // Hand-build a scenario that injects a stale-rid record into lawful mode.
  Scenario s;
  s.name = "stale-rid-under-lawful";
  s.n_agents = 2;
  s.key_spaces.bind("k", kGSetTag);
  ScenarioIntent bad{1, 1, "k", SemilatticeValue::gset({"x"}), ParentSpec::empty(), {}, {}, {}};
  bad.forged_rid = Rid{sha256(std::string_view("stale"))};
  bad.forged_parent_rids = RidSet{};
  s.intents.push_back(std::move(bad));
  s.config_overrides["bound"] = "10";
  s.validate();

  RunOptions lawful;  // metadata enforcement on
  ExecutionRecord rec = run_simulation(s, 4, lawful);
  CHECK(rec.structural_ambiguity);
}
