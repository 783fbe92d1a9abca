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

#ifndef DCS_PROVENANCE_DAG_HPP_
#define DCS_PROVENANCE_DAG_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcs/contribution.hpp"

namespace dcs {

enum class InsertOutcome {
  kApplied,    // vertex and parent edges recorded
  kBuffered,   // parents not all present yet; held until they arrive
  kDuplicate,  // identical record already present; no-op
};

// Buffered batch plus the rids it still references but which nobody has
// produced yet.
struct DagDelta {
  std::vector<Contribution> pending;
  RidSet dangling;
};

// Append-only causal history graph. Vertices are contributions keyed by rid;
// each contribution's parents define the edges (parent -> child). Inserts
// that would create a rid collision or close a cycle are rejected, so an
// instance is acyclic at all times. Out-of-order arrivals are buffered until
// their parents exist; the graph is "sealed" when that buffer is empty.
class ProvenanceDag {
 public:
  InsertOutcome insert(const Contribution& c);

  bool contains(const Rid& r) const { return vertices_.count(r) != 0; }
  const Contribution& at(const Rid& r) const;
  size_t size() const { return vertices_.size(); }
  size_t edge_count() const;
  bool sealed() const { return pending_.empty(); }
  DagDelta pending() const;

  const std::map<Rid, Contribution>& vertices() const { return vertices_; }
  const std::map<Rid, RidSet>& children() const { return children_; }

  // Strict ancestry: a directed path p -> ... -> r with at least one edge.
  bool is_ancestor(const Rid& p, const Rid& r) const;

  // Distinct, and neither is an ancestor of the other.
  bool are_concurrent(const Rid& a, const Rid& b) const;

  // Antichain layering by longest-path depth; rids sorted within a layer.
  // Requires a sealed graph.
  std::vector<std::vector<Rid>> topological_layers() const;

  // All keys present, and the join of all payloads per key.
  std::vector<std::string> keys() const;
  std::map<std::string, SemilatticeValue> per_key_aggregates() const;

  // Deterministic exports. canonical_text is the byte-exact form used for
  // cross-run comparison; dot_export is for visualization tools.
  std::string canonical_text() const;
  std::string layered_text() const;
  std::string dot_export() const;

  bool operator==(const ProvenanceDag& other) const {
    return vertices_ == other.vertices_ && pending_ == other.pending_;
  }

 private:
  void apply(const Contribution& c);
  void flush_pending();
  bool pending_cycle_through(const Rid& start) const;

  std::map<Rid, Contribution> vertices_;
  std::map<Rid, RidSet> children_;       // applied edges, parent -> children
  std::map<Rid, Contribution> pending_;  // buffered, parents incomplete
};

ProvenanceDag dag_from_contributions(const std::vector<Contribution>& list);

// Theorem-2-style graph comparison. A bijection on rids must preserve edges
// and, per vertex, creator, sequence, key and payload. With lawful
// content-addressed rids this collapses to map equality; the backtracking
// search below exists for violation modes where rids are forged or collide.
struct IsomorphismResult {
  bool isomorphic = false;
  std::map<Rid, Rid> mapping;  // g1 rid -> g2 rid when isomorphic
};

IsomorphismResult isomorphic(const ProvenanceDag& g1, const ProvenanceDag& g2);

// One concrete observation that separates two executions.
struct DistinguishingQuery {
  enum class Kind { kAncestor, kConcurrent, kAggregate, kVertexSet };
  Kind kind = Kind::kAncestor;
  Rid a, b;        // operands in g1
  Rid a2, b2;      // matched operands in g2
  std::string key;  // aggregate case
  bool answer_g1 = false;
  bool answer_g2 = false;
  std::string describe() const;
};

struct EquivalenceResult {
  bool equivalent = false;
  std::map<Rid, Rid> matching;  // witness matching when equivalent
  std::optional<DistinguishingQuery> witness;
};

// Observational equivalence over the query class: ancestor/concurrency
// queries across matched vertex pairs plus per-key join aggregates. Matching
// candidates pair vertices with equal (creator, seq, key, payload) labels;
// the check exhausts every candidate matching, so it is meant for small
// sealed graphs. Throws UnsealedDag.
EquivalenceResult observationally_equivalent(const ProvenanceDag& g1,
                                             const ProvenanceDag& g2);

}  // namespace dcs

#endif  // DCS_PROVENANCE_DAG_HPP_
