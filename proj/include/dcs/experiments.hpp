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

#ifndef DCS_EXPERIMENTS_HPP_
#define DCS_EXPERIMENTS_HPP_

#include "dcs/violations.hpp"

namespace dcs {

struct ReportRow {
  std::string id;           // claim / acceptance-criterion id
  std::string description;
  std::string measured;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  std::vector<uint64_t> seeds;
  std::vector<ReportRow> rows;

  bool all_pass() const;
  std::string text() const;                             // aligned table
  std::string machine(const std::string& manifest_digest) const;  // TSV rows
};

// Theorem 1: same scenario, many network seeds. Checks that every replay
// builds the identical history, every live relevant agent converges to the
// join of all payloads, and each local view is an induced subgraph of the
// global history.
ExperimentReport theorem_one_sweep(const Scenario& scenario, uint32_t n_seeds,
                                   uint64_t seed0 = 1, bool parallel = true);

// Theorem 2, ordering flavor: one scripted contribution set driven through
// each ordering policy; the per-seed histories must be isomorphic across
// policies in every run.
ExperimentReport theorem_two_ordering(const Scenario& scenario,
                                      const std::vector<std::string>& policy_specs,
                                      uint32_t n_runs, uint64_t seed0 = 1);

// Routing study shared by the Theorem-2 routing matrix and the performance
// table. Each task's per-hop forwarding events become a contribution chain
// (key = task id, parent = previous hop), so "same final path" is literally
// "same contribution set".
struct PolicyPerformance {
  std::string name;
  RouteMode mode = RouteMode::kStatic;
  std::vector<uint32_t> hops;  // per task
  uint32_t successes = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double success_rate = 0.0;
};

struct RoutingStudy {
  RoutingTopology topology;
  std::vector<PolicyPerformance> policies;
  uint32_t tasks = 0;
  uint32_t coincident_tasks = 0;     // all policies produced the same path
  uint32_t isomorphic_coincident = 0;
  double coincidence_rate = 0.0;
  double isomorphism_rate = 0.0;  // over the coincident subset
  bool static_is_optimal = true;  // static mean <= each learned mean
  bool distinct_95 = false;       // pairwise mean or variance differs at 95%
  std::string qtable_text;        // trained q-routing table export
};

RoutingStudy run_routing_study(uint32_t n_tasks, uint64_t seed);

ExperimentReport routing_matrix_report(const RoutingStudy& study);
ExperimentReport performance_report(const RoutingStudy& study);

// Prop. 2: the two-record concurrent and causal executions agree on values
// and disagree on structure, with a concrete distinguishing query.
ExperimentReport crdt_separation(uint64_t seed = 1);

// Prop. 1 at desk scale: observational equivalence agrees with isomorphism
// on generated pairs (half mutated to be non-isomorphic).
ExperimentReport proposition_one_check(uint32_t n_pairs, uint32_t max_vertices,
                                       uint64_t seed);

// Random lawful history for the Prop.-1 generator and the property suite.
ProvenanceDag make_random_lawful_dag(DetRng& rng, uint32_t max_vertices);

// Re-parents one non-root vertex under its original rid such that the
// reachability relation changes; the mutated history is structurally and
// observationally distinct.
ProvenanceDag mutate_reparent(const ProvenanceDag& dag, DetRng& rng);

// Welch mean z-test and a fourth-moment variance z-test at the 95% level.
bool distributions_differ_95(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);

ExperimentReport ambiguity_report(uint32_t trials, uint64_t seed_stream);

}  // namespace dcs

#endif  // DCS_EXPERIMENTS_HPP_
