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

#include "dcs/provenance_dag.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "dcs/errors.hpp"

namespace dcs {

const Contribution& ProvenanceDag::at(const Rid& r) const {
  auto it = vertices_.find(r);
  if (it == vertices_.end()) throw UnknownRid(r.short_hex());
  return it->second;
}

size_t ProvenanceDag::edge_count() const {
  size_t n = 0;
  for (const auto& [_, c] : vertices_) n += c.parents().size();
  return n;
}

InsertOutcome ProvenanceDag::insert(const Contribution& c) {
  if (auto it = vertices_.find(c.rid()); it != vertices_.end()) {
    if (it->second == c) return InsertOutcome::kDuplicate;
    throw RidCollision(c.rid().short_hex() + " already present with different content");
  }
  if (auto it = pending_.find(c.rid()); it != pending_.end()) {
    if (it->second == c) return InsertOutcome::kDuplicate;
    throw RidCollision(c.rid().short_hex() + " already buffered with different content");
  }
  if (c.parents().count(c.rid()) != 0)
    throw CycleDetected(c.rid().short_hex() + " lists itself as parent");

  bool complete = true;
  for (const Rid& p : c.parents()) {
    if (vertices_.count(p) == 0) {
      complete = false;
      break;
    }
  }
  if (complete) {
    apply(c);
    flush_pending();
    return InsertOutcome::kApplied;
  }
  pending_.emplace(c.rid(), c);
  if (pending_cycle_through(c.rid())) {
    pending_.erase(c.rid());
    throw CycleDetected("forward references close a cycle through " + c.rid().short_hex());
  }
  return InsertOutcome::kBuffered;
}

void ProvenanceDag::apply(const Contribution& c) {
  vertices_.emplace(c.rid(), c);
  for (const Rid& p : c.parents()) children_[p].insert(c.rid());
}

void ProvenanceDag::flush_pending() {
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (auto it = pending_.begin(); it != pending_.end();) {
      const Contribution& c = it->second;
      bool complete = std::all_of(c.parents().begin(), c.parents().end(),
                                  [&](const Rid& p) { return vertices_.count(p) != 0; });
      if (complete) {
        apply(c);
        it = pending_.erase(it);
        progressed = true;
      } else {
        ++it;
      }
    }
  }
}

// Applied vertices only reference applied parents, so any cycle introduced by
// a buffered record must run entirely through the pending set.
bool ProvenanceDag::pending_cycle_through(const Rid& start) const {
  std::vector<Rid> stack{start};
  RidSet seen;
  while (!stack.empty()) {
    Rid cur = stack.back();
    stack.pop_back();
    auto it = pending_.find(cur);
    if (it == pending_.end()) continue;
    for (const Rid& p : it->second.parents()) {
      if (p == start) return true;
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  return false;
}

DagDelta ProvenanceDag::pending() const {
  DagDelta d;
  for (const auto& [_, c] : pending_) d.pending.push_back(c);
  for (const auto& [_, c] : pending_) {
    for (const Rid& p : c.parents()) {
      if (vertices_.count(p) == 0 && pending_.count(p) == 0) d.dangling.insert(p);
    }
  }
  return d;
}

bool ProvenanceDag::is_ancestor(const Rid& p, const Rid& r) const {
  if (vertices_.count(p) == 0) throw UnknownRid(p.short_hex());
  if (vertices_.count(r) == 0) throw UnknownRid(r.short_hex());
  if (p == r) return false;
  std::deque<Rid> queue{p};
  RidSet seen{p};
  while (!queue.empty()) {
    Rid cur = queue.front();
    queue.pop_front();
    auto it = children_.find(cur);
    if (it == children_.end()) continue;
    for (const Rid& ch : it->second) {
      if (ch == r) return true;
      if (seen.insert(ch).second) queue.push_back(ch);
    }
  }
  return false;
}

bool ProvenanceDag::are_concurrent(const Rid& a, const Rid& b) const {
  if (a == b) {
    if (vertices_.count(a) == 0) throw UnknownRid(a.short_hex());
    return false;
  }
  return !is_ancestor(a, b) && !is_ancestor(b, a);
}

std::vector<std::vector<Rid>> ProvenanceDag::topological_layers() const {
  if (!sealed()) throw UnsealedDag("layering requires a sealed graph");
  std::map<Rid, size_t> depth;
  std::map<Rid, size_t> remaining;
  std::deque<Rid> ready;
  for (const auto& [rid, c] : vertices_) {
    remaining[rid] = c.parents().size();
    if (c.parents().empty()) ready.push_back(rid);
  }
  size_t max_depth = 0;
  while (!ready.empty()) {
    Rid cur = ready.front();
    ready.pop_front();
    size_t d = 0;
    for (const Rid& p : vertices_.at(cur).parents()) d = std::max(d, depth.at(p) + 1);
    depth[cur] = d;
    max_depth = std::max(max_depth, d);
    auto it = children_.find(cur);
    if (it == children_.end()) continue;
    for (const Rid& ch : it->second) {
      if (--remaining.at(ch) == 0) ready.push_back(ch);
    }
  }
  std::vector<std::vector<Rid>> layers(vertices_.empty() ? 0 : max_depth + 1);
  for (const auto& [rid, d] : depth) layers[d].push_back(rid);
  for (auto& layer : layers) std::sort(layer.begin(), layer.end());
  return layers;
}

std::vector<std::string> ProvenanceDag::keys() const {
  std::set<std::string> ks;
  for (const auto& [_, c] : vertices_) ks.insert(c.key());
  return {ks.begin(), ks.end()};
}

std::map<std::string, SemilatticeValue> ProvenanceDag::per_key_aggregates() const {
  std::map<std::string, std::vector<SemilatticeValue>> by_key;
  std::map<std::string, std::string> space_of;
  for (const auto& [_, c] : vertices_) {
    by_key[c.key()].push_back(c.payload());
    space_of.emplace(c.key(), c.payload().space());
  }
  std::map<std::string, SemilatticeValue> out;
  for (const auto& [k, vals] : by_key) out.emplace(k, join_all(space_of.at(k), vals));
  return out;
}

std::string ProvenanceDag::canonical_text() const {
  std::ostringstream os;
  os << "# dcs-dag v1\n";
  for (const auto& [_, c] : vertices_) os << log_record(c) << "\n";
  for (const auto& [_, c] : pending_) os << "pending " << log_record(c) << "\n";
  return os.str();
}

std::string ProvenanceDag::layered_text() const {
  std::ostringstream os;
  auto layers = topological_layers();
  for (size_t i = 0; i < layers.size(); ++i) {
    os << "layer " << i << ":";
    for (const Rid& r : layers[i]) {
      const Contribution& c = vertices_.at(r);
      os << " " << r.short_hex() << "(agent" << c.creator() << "," << c.key() << ")";
    }
    os << "\n";
  }
  return os.str();
}

std::string ProvenanceDag::dot_export() const {
  std::ostringstream os;
  os << "digraph dcs {\n  rankdir=TB;\n";
  for (const auto& [rid, c] : vertices_) {
    os << "  \"" << rid.short_hex() << "\" [label=\"" << rid.short_hex() << "\\nagent "
       << c.creator() << " seq " << c.creator_seq() << "\\n" << c.key() << "="
       << print_value(c.payload()) << "\"];\n";
  }
  for (const auto& [rid, c] : vertices_) {
    for (const Rid& p : c.parents())
      os << "  \"" << p.short_hex() << "\" -> \"" << rid.short_hex() << "\";\n";
  }
  os << "}\n";
  return os.str();
}

ProvenanceDag dag_from_contributions(const std::vector<Contribution>& list) {
  ProvenanceDag dag;
  for (const Contribution& c : list) dag.insert(c);
  return dag;
}

namespace {

// Vertices are matched by everything except rid and parents; rid is scheme-
// dependent and parents are exactly what isomorphism must verify.
std::string label_of(const Contribution& c) {
  std::ostringstream os;
  os << c.creator() << '|' << c.creator_seq() << '|' << c.key() << '|'
     << c.payload().space() << '|' << to_hex(canonical_bytes(c.payload()));
  return os.str();
}

std::vector<Rid> topo_order(const ProvenanceDag& g) {
  std::map<Rid, size_t> remaining;
  std::deque<Rid> ready;
  for (const auto& [rid, c] : g.vertices()) {
    size_t n = 0;
    for (const Rid& p : c.parents())
      if (g.vertices().count(p) != 0) n++;
    remaining[rid] = n;
    if (n == 0) ready.push_back(rid);
  }
  std::vector<Rid> order;
  while (!ready.empty()) {
    Rid cur = ready.front();
    ready.pop_front();
    order.push_back(cur);
    auto it = g.children().find(cur);
    if (it == g.children().end()) continue;
    for (const Rid& ch : it->second) {
      if (--remaining.at(ch) == 0) ready.push_back(ch);
    }
  }
  return order;
}

struct IsoSearch {
  const ProvenanceDag& g1;
  const ProvenanceDag& g2;
  std::vector<Rid> order;                       // g1 vertices, parents first
  std::map<std::string, std::vector<Rid>> g2_by_label;
  std::map<Rid, Rid> mapping;
  RidSet used;

  bool assign(size_t idx) {
    if (idx == order.size()) return true;
    const Rid& v = order[idx];
    const Contribution& cv = g1.vertices().at(v);
    auto group = g2_by_label.find(label_of(cv));
    if (group == g2_by_label.end()) return false;
    // The image's parent set must equal the mapped parent set; parents are
    // assigned before children, so the requirement is fully determined here.
    RidSet mapped_parents;
    for (const Rid& p : cv.parents()) {
      auto it = mapping.find(p);
      if (it == mapping.end()) return false;  // dangling parent, cannot match
      mapped_parents.insert(it->second);
    }
    for (const Rid& w : group->second) {
      if (used.count(w) != 0) continue;
      if (g2.vertices().at(w).parents() != mapped_parents) continue;
      mapping.emplace(v, w);
      used.insert(w);
      if (assign(idx + 1)) return true;
      mapping.erase(v);
      used.erase(w);
    }
    return false;
  }
};

}  // namespace

IsomorphismResult isomorphic(const ProvenanceDag& g1, const ProvenanceDag& g2) {
  IsomorphismResult res;
  if (g1.size() != g2.size() || g1.edge_count() != g2.edge_count()) return res;

  // Lawful content-addressed histories compare as plain maps.
  if (g1.vertices() == g2.vertices()) {
    res.isomorphic = true;
    for (const auto& [rid, _] : g1.vertices()) res.mapping.emplace(rid, rid);
    return res;
  }

  IsoSearch search{g1, g2, topo_order(g1), {}, {}, {}};
  for (const auto& [rid, c] : g2.vertices()) search.g2_by_label[label_of(c)].push_back(rid);
  if (search.order.size() != g1.size()) return res;  // g1 itself has a cycle or dangling refs
  if (!search.assign(0)) return res;
  res.isomorphic = true;
  res.mapping = std::move(search.mapping);
  return res;
}

std::string DistinguishingQuery::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kAncestor:
      os << "isAncestor(" << a.short_hex() << ", " << b.short_hex() << ") = "
         << (answer_g1 ? "true" : "false") << " vs isAncestor(" << a2.short_hex()
         << ", " << b2.short_hex() << ") = " << (answer_g2 ? "true" : "false");
      break;
    case Kind::kConcurrent:
      os << "areConcurrent(" << a.short_hex() << ", " << b.short_hex() << ") = "
         << (answer_g1 ? "true" : "false") << " vs areConcurrent(" << a2.short_hex()
         << ", " << b2.short_hex() << ") = " << (answer_g2 ? "true" : "false");
      break;
    case Kind::kAggregate:
      os << "joinAll over key '" << key << "' differs";
      break;
    case Kind::kVertexSet:
      os << "contribution multiset differs: " << key;
      break;
  }
  return os.str();
}

namespace {

struct ReachMatrix {
  std::vector<Rid> rids;             // sorted
  std::map<Rid, size_t> index;
  std::vector<std::vector<bool>> reach;  // strict ancestry

  explicit ReachMatrix(const ProvenanceDag& g) {
    for (const auto& [rid, _] : g.vertices()) rids.push_back(rid);
    for (size_t i = 0; i < rids.size(); ++i) index.emplace(rids[i], i);
    size_t n = rids.size();
    reach.assign(n, std::vector<bool>(n, false));
    for (const Rid& v : topo_order(g)) {
      size_t vi = index.at(v);
      for (const Rid& p : g.vertices().at(v).parents()) {
        size_t pi = index.at(p);
        reach[pi][vi] = true;
        for (size_t k = 0; k < n; ++k)
          if (reach[k][pi]) reach[k][vi] = true;
      }
    }
  }
};

// Enumerates label-preserving bijections g1 -> g2 and tests whether any of
// them makes every ancestor query agree. Factorial in the label group sizes,
// which is why callers keep these graphs small.
struct EquivSearch {
  const ReachMatrix& m1;
  const ReachMatrix& m2;
  std::vector<std::vector<size_t>> candidates;  // per g1 index: g2 indices, same label
  std::vector<size_t> assign;                   // g1 index -> g2 index
  std::vector<bool> used;
  std::vector<size_t> first_assign;
  bool have_first = false;

  bool search(size_t idx) {
    size_t n = m1.rids.size();
    if (idx == n) {
      if (!have_first) {
        first_assign = assign;
        have_first = true;
      }
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          if (m1.reach[i][j] != m2.reach[assign[i]][assign[j]]) return false;
      return true;
    }
    for (size_t w : candidates[idx]) {
      if (used[w]) continue;
      assign[idx] = w;
      used[w] = true;
      if (search(idx + 1)) return true;
      used[w] = false;
    }
    return false;
  }
};

}  // namespace

EquivalenceResult observationally_equivalent(const ProvenanceDag& g1,
                                             const ProvenanceDag& g2) {
  if (!g1.sealed() || !g2.sealed())
    throw UnsealedDag("observational equivalence requires sealed graphs");

  EquivalenceResult res;

  auto agg1 = g1.per_key_aggregates();
  auto agg2 = g2.per_key_aggregates();
  if (agg1 != agg2) {
    std::string key;
    for (const auto& [k, v] : agg1) {
      auto it = agg2.find(k);
      if (it == agg2.end() || !(it->second == v)) {
        key = k;
        break;
      }
    }
    if (key.empty() && !agg2.empty()) key = agg2.begin()->first;
    DistinguishingQuery q;
    q.kind = DistinguishingQuery::Kind::kAggregate;
    q.key = key;
    res.witness = q;
    return res;
  }

  std::map<std::string, std::vector<Rid>> lab1, lab2;
  for (const auto& [rid, c] : g1.vertices()) lab1[label_of(c)].push_back(rid);
  for (const auto& [rid, c] : g2.vertices()) lab2[label_of(c)].push_back(rid);
  {
    bool same_multiset = lab1.size() == lab2.size();
    if (same_multiset) {
      for (const auto& [l, v] : lab1) {
        auto it = lab2.find(l);
        if (it == lab2.end() || it->second.size() != v.size()) {
          same_multiset = false;
          break;
        }
      }
    }
    if (!same_multiset) {
      DistinguishingQuery q;
      q.kind = DistinguishingQuery::Kind::kVertexSet;
      for (const auto& [l, v] : lab1) {
        auto it = lab2.find(l);
        if (it == lab2.end() || it->second.size() != v.size()) {
          q.key = l;
          break;
        }
      }
      res.witness = q;
      return res;
    }
  }

  ReachMatrix m1(g1), m2(g2);

  // Guard the factorial enumeration.
  double bijections = 1.0;
  for (const auto& [_, v] : lab1) {
    for (size_t i = 2; i <= v.size(); ++i) bijections *= static_cast<double>(i);
    if (bijections > 5e6)
      throw ConfigError("graphs too large for exhaustive equivalence check");
  }

  EquivSearch search{m1, m2, {}, {}, {}, {}, false};
  search.candidates.resize(m1.rids.size());
  for (size_t i = 0; i < m1.rids.size(); ++i) {
    const std::string l = label_of(g1.vertices().at(m1.rids[i]));
    for (const Rid& w : lab2.at(l)) search.candidates[i].push_back(m2.index.at(w));
  }
  search.assign.resize(m1.rids.size());
  search.used.assign(m2.rids.size(), false);

  if (m1.rids.empty() || search.search(0)) {
    res.equivalent = true;
    for (size_t i = 0; i < m1.rids.size(); ++i)
      res.matching.emplace(m1.rids[i], m2.rids[search.assign[i]]);
    return res;
  }

  // Not equivalent: report the first ancestor query that separates the two
  // histories under the first label-preserving matching.
  const std::vector<size_t>& phi = search.first_assign;
  for (size_t i = 0; i < m1.rids.size(); ++i) {
    for (size_t j = 0; j < m1.rids.size(); ++j) {
      if (m1.reach[i][j] != m2.reach[phi[i]][phi[j]]) {
        DistinguishingQuery q;
        q.kind = DistinguishingQuery::Kind::kAncestor;
        q.a = m1.rids[i];
        q.b = m1.rids[j];
        q.a2 = m2.rids[phi[i]];
        q.b2 = m2.rids[phi[j]];
        q.answer_g1 = m1.reach[i][j];
        q.answer_g2 = m2.reach[phi[i]][phi[j]];
        res.witness = q;
        return res;
      }
    }
  }
  res.witness = DistinguishingQuery{};  // unreachable for sane inputs
  return res;
}

}  // namespace dcs
