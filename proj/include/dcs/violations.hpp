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

#ifndef DCS_VIOLATIONS_HPP_
#define DCS_VIOLATIONS_HPP_

#include "dcs/network_sim.hpp"

namespace dcs {

// How a pair of replays from an identical initial state failed to agree.
enum class AmbiguityClass {
  kNone,
  kStructuralAmbiguity,  // non-isomorphic histories
  kValueDivergence,      // relevant agents' final states disagree
  kIllDefinedGraph,      // one rid claimed by different records
  kCycleDetected,        // history is not a DAG
};

std::string ambiguity_class_name(AmbiguityClass c);

struct AmbiguityVerdict {
  ViolationMode mode = ViolationMode::kLawful;
  AmbiguityClass cls = AmbiguityClass::kNone;
  bool ambiguous = false;
  bool isomorphic_dags = true;
  std::string detail;
  ExecutionRecord run_a;
  ExecutionRecord run_b;
};

// The hand-built scenario mirroring each violation's figure. The races in
// these scenarios are constructed, not probabilistic: scripted delivery
// delays flip with the seed's parity, so a parity-split seed pair always
// realizes both sides of the race.
Scenario canonical_violation_scenario(ViolationMode mode);

// Runs the scenario twice (one seed each) with the mode's injection active
// and classifies the disagreement.
AmbiguityVerdict run_violation(ViolationMode mode, const Scenario& scenario,
                               std::pair<uint64_t, uint64_t> seeds);

AmbiguityVerdict run_violation(ViolationMode mode, std::pair<uint64_t, uint64_t> seeds);

// Fraction of trial pairs whose two runs are not structurally isomorphic
// (for the value-space modes: whose relevant agents' final states are
// unequal). Trial t uses the parity-split pair derived from seed_stream.
double ambiguity_rate(ViolationMode mode, const Scenario& scenario, uint32_t trials,
                      uint64_t seed_stream);

struct AmbiguityTableRow {
  std::string system;
  std::string violated_axiom;
  double rate = 0.0;
  bool extension = false;  // row beyond the paper's table
};

std::vector<AmbiguityTableRow> ambiguity_table(uint32_t trials, uint64_t seed_stream);

// Fixed rids used by the forged canonical scenarios.
Rid fig3_shared_rid();
Rid fig5_rid(int which);  // 1 or 2

}  // namespace dcs

#endif  // DCS_VIOLATIONS_HPP_
