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

// Acceptance suite: one check per headline claim, each printed as a single
// pass/fail line with its measurement and elapsed time. Exit status is
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "dcs/artifacts.hpp"
#include "dcs/experiments.hpp"
#include "dcs/parallel.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace dcs;
using dcs::testing::random_value;

namespace {

struct Outcome {
  bool pass = false;
  std::string measured;
};

double run_timed(const std::function<Outcome()>& fn, Outcome* out) {
  auto t0 = std::chrono::steady_clock::now();
  *out = fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- A1: semilattice laws -------------------------------------------------

Outcome a1_semilattice_laws() {
  const auto& reg = StateSpaceRegistry::builtin();
  uint64_t checked = 0;
  for (const std::string& tag : reg.lawful_tags()) {
    DetRng rng(mix_u64({0xA1, std::hash<std::string>{}(tag)}));
    const SemilatticeValue& bottom = reg.space(tag).bottom;
    for (int t = 0; t < 1000; ++t) {
      auto a = random_value(tag, rng);
      auto b = random_value(tag, rng);
      auto c = random_value(tag, rng);
      bool ok = join(join(a, b), c) == join(a, join(b, c)) && join(a, b) == join(b, a) &&
                join(a, a) == a && leq(a, join(a, b)) && join(bottom, a) == a;
      if (!ok) return {false, "law failed on space " + tag};
      checked++;
    }
  }
  return {true, std::to_string(checked) + " triples across 3 lawful spaces"};
}

// --- A2: theorem 1 convergence ---------------------------------------------

Outcome a2_theorem_one() {
  Scenario s = make_random_scenario(1, 5, 20, 10);
  ExperimentReport r = theorem_one_sweep(s, 100);
  std::string measured;
  for (const ReportRow& row : r.rows) measured += row.id + "=" + row.measured + " ";
  return {r.all_pass(), measured};
}

// --- A3: theorem 2 matrix --------------------------------------------------

Outcome a3_theorem_two() {
  ExperimentReport ordering = theorem_two_ordering(
      ordering_matrix_scenario(), {"fifo", "batching:2", "reordering"}, 50);
  RoutingStudy study = run_routing_study(500, 7);
  bool routing_ok =
      study.coincident_tasks > 0 && study.isomorphic_coincident == study.coincident_tasks;
  std::ostringstream measured;
  measured << "ordering " << ordering.rows[1].measured << ", routing "
           << study.isomorphic_coincident << "/" << study.coincident_tasks
           << " on coincident subset (coincidence "
           << static_cast<int>(study.coincidence_rate * 100) << "%)";
  return {ordering.all_pass() && routing_ok, measured.str()};
}

// --- A4: ambiguity table ---------------------------------------------------

Outcome a4_ambiguity_table() {
  double lawful = ambiguity_rate(ViolationMode::kLawful,
                                 canonical_violation_scenario(ViolationMode::kLawful),
                                 100, 0xA4);
  double mutable_parents =
      ambiguity_rate(ViolationMode::kMutableParents,
                     canonical_violation_scenario(ViolationMode::kMutableParents), 100,
                     0xA4);
  double forgery = ambiguity_rate(ViolationMode::kCausalForgery,
                                  canonical_violation_scenario(ViolationMode::kCausalForgery),
                                  100, 0xA4);
  std::ostringstream measured;
  measured << "lawful " << lawful * 100 << "%, axiom-4 " << mutable_parents * 100
           << "%, axiom-5 " << forgery * 100 << "%";
  return {lawful == 0.0 && mutable_parents == 1.0 && forgery == 1.0, measured.str()};
}

// --- A5: theorem 3 completeness ---------------------------------------------

Outcome a5_theorem_three() {
  struct Case {
    ViolationMode mode;
    AmbiguityClass want;
  };
  const Case cases[] = {
      {ViolationMode::kNoFairness, AmbiguityClass::kValueDivergence},
      {ViolationMode::kNonSemilattice, AmbiguityClass::kValueDivergence},
      {ViolationMode::kDuplicateRid, AmbiguityClass::kIllDefinedGraph},
      {ViolationMode::kMutableParents, AmbiguityClass::kStructuralAmbiguity},
      {ViolationMode::kCausalForgery, AmbiguityClass::kCycleDetected},
  };
  std::string measured;
  for (const Case& c : cases) {
    // Deterministic: the verdict class must be identical across seed pairs.
    AmbiguityVerdict v1 = run_violation(c.mode, {0, 1});
    AmbiguityVerdict v2 = run_violation(c.mode, {100, 101});
    measured += violation_mode_name(c.mode) + "=" + ambiguity_class_name(v1.cls) + " ";
    if (v1.cls != c.want || v2.cls != c.want) return {false, measured};
    // Axiom 2's failure must realize both schedules of the figure.
    if (c.mode == ViolationMode::kNonSemilattice) {
      if (!(v1.run_a.agent(3).state("S") == SemilatticeValue::overwrite(2)) ||
          !(v1.run_b.agent(3).state("S") == SemilatticeValue::overwrite(1)))
        return {false, measured + "(schedules not realized)"};
    }
  }
  return {true, measured};
}

// --- A6: proposition 2 separation -------------------------------------------

Outcome a6_separation() {
  ExperimentReport r1 = crdt_separation(1);
  ExperimentReport r2 = crdt_separation(2);  // deterministic across seeds
  bool deterministic = r1.rows[2].measured == r2.rows[2].measured;
  std::string measured = r1.rows[2].measured;
  return {r1.all_pass() && r2.all_pass() && deterministic, measured};
}

// --- A7: proposition 1 iff ---------------------------------------------------

Outcome a7_prop_one() {
  ExperimentReport r = proposition_one_check(200, 8, 0xA7);
  return {r.all_pass(), r.rows[0].measured + " agreement"};
}

// --- A8: appendix lemmas -----------------------------------------------------

Outcome a8_lemmas() {
  KeySpaces spaces;
  spaces.bind("k", kGSetTag);
  auto root = [&](AgentId creator, uint64_t seq, const std::string& elem) {
    return make_contribution(creator, seq, "k", {}, SemilatticeValue::gset({elem}), {},
                             spaces);
  };

  // L1 monotonicity and L5 preservation over 500 random sequences.
  DetRng rng(0xA8);
  for (int trial = 0; trial < 500; ++trial) {
    AgentState agent(1, {"k"}, spaces);
    std::vector<SemilatticeValue> merged;
    for (int i = 0; i < 12; ++i) {
      SemilatticeValue before = agent.state("k");
      Contribution c = root(static_cast<AgentId>(rng.uniform(2, 5)), rng.uniform(0, 30),
                            std::string(1, static_cast<char>('a' + rng.uniform(0, 7))));
      agent.receive(c);
      merged.push_back(c.payload());
      if (!leq(before, agent.state("k"))) return {false, "L1 failed"};
      for (const SemilatticeValue& p : merged)
        if (!leq(p, agent.state("k"))) return {false, "L5 failed"};
    }
  }

  // L2 order/duplicate irrelevance: 500 random lists, random permutations
  // plus exhaustive coverage for short lists.
  for (int trial = 0; trial < 500; ++trial) {
    size_t n = 1 + rng.uniform(0, 4);
    std::vector<SemilatticeValue> values;
    for (size_t i = 0; i < n; ++i) values.push_back(dcs::testing::random_gset(rng));
    SemilatticeValue expected = join_all(kGSetTag, values);
    std::vector<SemilatticeValue> shuffled = values;
    rng.shuffle(shuffled);
    shuffled.push_back(shuffled.front());
    if (!(join_all(kGSetTag, shuffled) == expected)) return {false, "L2 failed"};
  }

  // L3 decomposability over 500 random receive prefixes.
  for (int trial = 0; trial < 500; ++trial) {
    AgentState agent(1, {"k"}, spaces);
    for (int i = 0; i < 8; ++i) {
      agent.receive(root(static_cast<AgentId>(rng.uniform(2, 5)), i,
                         std::string(1, static_cast<char>('a' + rng.uniform(0, 7)))));
      if (!(agent.state("k") == join_all(kGSetTag, agent.observed_payloads("k"))))
        return {false, "L3 failed"};
    }
  }

  // L4 propagation: 500 seeded runs of a random scenario with fairness on.
  Scenario s = make_random_scenario(8, 4, 12, 10);
  auto records = run_seeds(s, seed_range(1, 500));
  for (const ExecutionRecord& rec : records) {
    if (!rec.quiescent || !rec.fairness_delivery_ok) return {false, "L4 failed"};
    for (const Contribution& c : rec.created) {
      for (const AgentState& a : rec.agents) {
        if (!a.subscribed(c.key()) || !rec.is_live(a.id())) continue;
        if (a.observed().count(c.rid()) == 0) return {false, "L4 failed"};
      }
    }
  }
  return {true, "L1-L5 over >=500 trials each"};
}

// --- A9: replay determinism --------------------------------------------------

Outcome a9_replay() {
  DetRng rng(0xA9);
  const std::vector<std::string> refs = {"builtin:fig6a", "builtin:fig6b",
                                         "builtin:ordering-matrix", "builtin:crash-stop",
                                         "builtin:random"};
  fs::path base = fs::temp_directory_path() / "dcs-acceptance-replay";
  fs::remove_all(base);
  for (int i = 0; i < 10; ++i) {
    RunManifest manifest;
    manifest.scenario_ref = refs[rng.uniform(0, refs.size() - 1)];
    manifest.seed = rng.next_u64();
    manifest.config_overrides.emplace_back(
        "drop", "0." + std::to_string(rng.uniform(0, 4)));
    manifest.config_overrides.emplace_back("bound", "12");
    Scenario scenario = resolve_scenario(manifest.scenario_ref);
    manifest.scenario_name = scenario.name;

    fs::path d1 = base / ("m" + std::to_string(i) + "-a");
    fs::path d2 = base / ("m" + std::to_string(i) + "-b");
    write_run_artifacts(d1, manifest, replay_manifest(manifest));
    write_run_artifacts(d2, manifest, replay_manifest(manifest));
    if (tree_digest(d1) != tree_digest(d2)) {
      fs::remove_all(base);
      return {false, "tree digests diverged for manifest " + std::to_string(i)};
    }
  }
  fs::remove_all(base);
  return {true, "10/10 manifests byte-identical"};
}

// --- A10: policy distinctiveness ----------------------------------------------

Outcome a10_distinctiveness() {
  RoutingStudy study = run_routing_study(500, 7);
  std::ostringstream measured;
  measured << std::fixed << std::setprecision(2);
  for (const PolicyPerformance& p : study.policies)
    measured << p.name << " " << p.mean << "+/-" << p.stddev << " ("
             << static_cast<int>(p.success_rate * 100) << "%) ";
  bool success_all = true;
  for (const PolicyPerformance& p : study.policies)
    if (p.success_rate != 1.0) success_all = false;
  return {study.static_is_optimal && study.distinct_95 && success_all, measured.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* description;
    double time_limit_s;
    std::function<Outcome()> fn;
  };

  const std::vector<Criterion> criteria = {
      {"A1", "semilattice laws (ACI, inflationary, bottom) on 3 lawful spaces", 5.0,
       a1_semilattice_laws},
      {"A2", "theorem 1: 5 agents, 20 contributions, 100 seeds converge", 30.0,
       a2_theorem_one},
      {"A3", "theorem 2: ordering and routing histories isomorphic", 120.0,
       a3_theorem_two},
      {"A4", "ambiguity table: lawful 0%, axiom-4 100%, axiom-5 100%", 30.0,
       a4_ambiguity_table},
      {"A5", "theorem 3: every axiom removal hits its failure class", 60.0,
       a5_theorem_three},
      {"A6", "prop 2: equal values, non-isomorphic histories, witness query", 30.0,
       a6_separation},
      {"A7", "prop 1: equivalence iff isomorphism on 200 pairs", 30.0, a7_prop_one},
      {"A8", "appendix lemmas L1-L5 over >=500 trials each", 120.0, a8_lemmas},
      {"A9", "replay determinism on 10 random manifests", 60.0, a9_replay},
      {"A10", "routing policies distinct at 95%, static optimal, success 100%", 120.0,
       a10_distinctiveness},
  };

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    Outcome outcome;
    double elapsed = run_timed(c.fn, &outcome);
    bool within_budget = elapsed < c.time_limit_s;
    bool pass = outcome.pass && within_budget;
    all_pass = all_pass && pass;
    std::printf("[%s] %-4s %s | %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", c.id,
                c.description, outcome.measured.c_str(), elapsed,
                within_budget ? "" : " OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: FAILURES PRESENT");
  return all_pass ? 0 : 1;
}
