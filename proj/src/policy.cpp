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

#include "dcs/policy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "dcs/errors.hpp"

namespace dcs {

std::vector<std::vector<Contribution>> FifoPolicy::dispatch(
    std::vector<Contribution> outbox, DetRng&) const {
  std::vector<std::vector<Contribution>> batches;
  for (auto& c : outbox) batches.push_back({std::move(c)});
  return batches;
}

BatchingPolicy::BatchingPolicy(size_t batch_size) : batch_size_(batch_size) {
  if (batch_size_ == 0) throw ConfigError("batch size must be positive");
}

std::vector<std::vector<Contribution>> BatchingPolicy::dispatch(
    std::vector<Contribution> outbox, DetRng&) const {
  std::vector<std::vector<Contribution>> batches;
  for (size_t i = 0; i < outbox.size(); i += batch_size_) {
    std::vector<Contribution> batch;
    for (size_t j = i; j < std::min(outbox.size(), i + batch_size_); ++j)
      batch.push_back(std::move(outbox[j]));
    batches.push_back(std::move(batch));
  }
  return batches;
}

std::vector<std::vector<Contribution>> ReorderingPolicy::dispatch(
    std::vector<Contribution> outbox, DetRng& rng) const {
  rng.shuffle(outbox);
  std::vector<std::vector<Contribution>> batches;
  for (auto& c : outbox) batches.push_back({std::move(c)});
  return batches;
}

std::vector<std::vector<Contribution>> apply_policy(const OperationalPolicy& policy,
                                                    const std::vector<Contribution>& outbox,
                                                    DetRng& rng) {
  auto batches = policy.dispatch(outbox, rng);
  std::multiset<std::string> before, after;
  for (const auto& c : outbox) before.insert(log_record(c));
  for (const auto& batch : batches)
    for (const auto& c : batch) after.insert(log_record(c));
  if (before != after)
    throw PolicyTamper("policy '" + policy.tag() + "' altered the outbox multiset");
  return batches;
}

std::shared_ptr<const OperationalPolicy> make_policy(const std::string& spec) {
  if (spec == "fifo") return std::make_shared<FifoPolicy>();
  if (spec == "reordering") return std::make_shared<ReorderingPolicy>();
  if (spec.rfind("batching:", 0) == 0) {
    size_t n = std::stoul(spec.substr(9));
    return std::make_shared<BatchingPolicy>(n);
  }
  throw ConfigError("unknown policy '" + spec + "'");
}

// ---------------------------------------------------------------------------

RoutingTopology RoutingTopology::random_connected(uint32_t n, size_t edge_target,
                                                  uint64_t seed) {
  if (n < 2) throw ConfigError("topology needs at least 2 nodes");
  size_t max_edges = static_cast<size_t>(n) * (n - 1) / 2;
  if (edge_target < n - 1 || edge_target > max_edges)
    throw ConfigError("edge target out of range for connected graph");

  RoutingTopology t;
  t.n = n;
  t.adjacency.assign(n + 1, {});
  DetRng rng(mix_u64({seed, n, edge_target}));

  auto add_edge = [&](AgentId a, AgentId b) {
    t.adjacency[a].insert(b);
    t.adjacency[b].insert(a);
  };

  // Random spanning tree: attach each node to a random earlier one.
  std::vector<AgentId> order;
  for (AgentId a = 1; a <= n; ++a) order.push_back(a);
  rng.shuffle(order);
  for (uint32_t i = 1; i < n; ++i)
    add_edge(order[i], order[rng.uniform(0, i - 1)]);

  size_t edges = n - 1;
  while (edges < edge_target) {
    AgentId a = static_cast<AgentId>(rng.uniform(1, n));
    AgentId b = static_cast<AgentId>(rng.uniform(1, n));
    if (a == b || t.adjacency[a].count(b) != 0) continue;
    add_edge(a, b);
    edges++;
  }
  return t;
}

const std::set<AgentId>& RoutingTopology::neighbors(AgentId a) const {
  if (a < 1 || a > n) throw ConfigError("node " + std::to_string(a) + " out of range");
  return adjacency[a];
}

size_t RoutingTopology::edge_count() const {
  size_t total = 0;
  for (const auto& nbs : adjacency) total += nbs.size();
  return total / 2;
}

bool RoutingTopology::connected() const {
  if (n == 0) return false;
  std::set<AgentId> seen{1};
  std::deque<AgentId> queue{1};
  while (!queue.empty()) {
    AgentId cur = queue.front();
    queue.pop_front();
    for (AgentId nb : adjacency[cur])
      if (seen.insert(nb).second) queue.push_back(nb);
  }
  return seen.size() == n;
}

std::vector<std::vector<uint32_t>> RoutingTopology::bfs_distances() const {
  const uint32_t inf = std::numeric_limits<uint32_t>::max();
  std::vector<std::vector<uint32_t>> dist(n + 1, std::vector<uint32_t>(n + 1, inf));
  for (AgentId src = 1; src <= n; ++src) {
    dist[src][src] = 0;
    std::deque<AgentId> queue{src};
    while (!queue.empty()) {
      AgentId cur = queue.front();
      queue.pop_front();
      for (AgentId nb : adjacency[cur]) {
        if (dist[src][nb] == inf) {
          dist[src][nb] = dist[src][cur] + 1;
          queue.push_back(nb);
        }
      }
    }
  }
  return dist;
}

QTable::QTable(const RoutingTopology& topo, double alpha) : topo_(&topo), alpha_(alpha) {
  if (alpha <= 0.0 || alpha > 1.0) throw ConfigError("alpha must be in (0,1]");
  for (AgentId node = 1; node <= topo.n; ++node) {
    for (AgentId dest = 1; dest <= topo.n; ++dest) {
      if (dest == node) continue;
      for (AgentId nb : topo.neighbors(node)) q_[{node, dest, nb}] = 0.0;
    }
  }
}

double QTable::q(AgentId node, AgentId dest, AgentId neighbor) const {
  auto it = q_.find({node, dest, neighbor});
  if (it == q_.end())
    throw NotNeighbor(std::to_string(neighbor) + " is not adjacent to " +
                      std::to_string(node));
  return it->second;
}

double QTable::min_q(AgentId node, AgentId dest) const {
  double best = std::numeric_limits<double>::infinity();
  for (AgentId nb : topo_->neighbors(node)) best = std::min(best, q(node, dest, nb));
  return best;
}

void QTable::update(AgentId node, AgentId dest, AgentId neighbor,
                    double observed_remaining) {
  auto it = q_.find({node, dest, neighbor});
  if (it == q_.end())
    throw NotNeighbor(std::to_string(neighbor) + " is not adjacent to " +
                      std::to_string(node));
  it->second += alpha_ * (1.0 + observed_remaining - it->second);
}

std::string QTable::export_text() const {
  std::ostringstream os;
  os << "# q-table alpha=" << alpha_ << "\n";
  for (const auto& [key, val] : q_) {
    auto [node, dest, nb] = key;
    os << "node=" << node << " dest=" << dest << " via=" << nb << " q=" << val << "\n";
  }
  return os.str();
}

std::string route_mode_name(RouteMode m) {
  switch (m) {
    case RouteMode::kStatic: return "static";
    case RouteMode::kQLearning: return "q-routing";
    case RouteMode::kAdaptive: return "adaptive-q-routing";
  }
  return "?";
}

namespace {

AgentId greedy_min_q(const RoutingTopology& topo, const QTable& qtable, AgentId current,
                     AgentId dest, const std::set<AgentId>& avoid) {
  AgentId best = 0;
  double best_q = std::numeric_limits<double>::infinity();
  bool any_unvisited = false;
  for (AgentId nb : topo.neighbors(current))
    if (avoid.count(nb) == 0) any_unvisited = true;
  for (AgentId nb : topo.neighbors(current)) {
    if (any_unvisited && avoid.count(nb) != 0) continue;
    double v = qtable.q(current, dest, nb);
    if (v < best_q || (v == best_q && nb < best)) {
      best_q = v;
      best = nb;
    }
  }
  return best;
}

}  // namespace

AgentId route_hop(const RoutingTopology& topo, const QTable& qtable, AgentId current,
                  AgentId dest, RouteMode mode, DetRng* rng, double epsilon) {
  if (current == dest) throw ConfigError("route_hop: already at destination");
  if (topo.neighbors(current).empty())
    throw Unreachable("node " + std::to_string(current) + " has no neighbors");

  if (mode == RouteMode::kStatic) {
    // Next hop on a shortest path, smallest node id on ties.
    auto dist = topo.bfs_distances();
    AgentId best = 0;
    uint32_t best_d = std::numeric_limits<uint32_t>::max();
    for (AgentId nb : topo.neighbors(current)) {
      uint32_t d = dist[nb][dest];
      if (d < best_d || (d == best_d && nb < best)) {
        best_d = d;
        best = nb;
      }
    }
    return best;
  }

  if (rng != nullptr && epsilon > 0.0 && rng->bernoulli(epsilon)) {
    // Explore among near-optimal neighbors only; a detour is then bounded by
    // one extra hop on a converged table.
    double floor = qtable.min_q(current, dest);
    std::vector<AgentId> near;
    for (AgentId nb : topo.neighbors(current))
      if (qtable.q(current, dest, nb) <= floor + 1.0) near.push_back(nb);
    return near[rng->uniform(0, near.size() - 1)];
  }
  return greedy_min_q(topo, qtable, current, dest, {});
}

QTable train_q_routing(const RoutingTopology& topo, const QRoutingConfig& cfg,
                       uint64_t seed) {
  QTable table(topo, cfg.alpha);
  DetRng rng(mix_u64({seed, 0x71u}));
  std::deque<double> recent;

  for (uint32_t episode = 0; episode < cfg.episodes; ++episode) {
    if (cfg.adaptive && recent.size() >= 2) {
      double mean = 0;
      for (double h : recent) mean += h;
      mean /= static_cast<double>(recent.size());
      double var = 0;
      for (double h : recent) var += (h - mean) * (h - mean);
      var /= static_cast<double>(recent.size());
      double cv = mean > 0 ? std::sqrt(var) / mean : 0.0;
      table.set_alpha(std::clamp(cfg.alpha * (1.0 + cv), cfg.alpha_min, 1.0));
    }

    double eps = cfg.initial_epsilon *
                 (1.0 - static_cast<double>(episode) / static_cast<double>(cfg.episodes));
    AgentId src = static_cast<AgentId>(rng.uniform(1, topo.n));
    AgentId dst = static_cast<AgentId>(rng.uniform(1, topo.n));
    if (src == dst) continue;

    AgentId cur = src;
    std::set<AgentId> visited{cur};
    uint32_t hops = 0;
    const uint32_t cap = topo.n * 2;
    while (cur != dst && hops < cap) {
      AgentId next;
      if (rng.bernoulli(eps)) {
        std::vector<AgentId> options;
        for (AgentId nb : topo.neighbors(cur))
          if (visited.count(nb) == 0) options.push_back(nb);
        if (options.empty())
          options.assign(topo.neighbors(cur).begin(), topo.neighbors(cur).end());
        next = options[rng.uniform(0, options.size() - 1)];
      } else {
        next = greedy_min_q(topo, table, cur, dst, visited);
      }
      double remaining = (next == dst) ? 0.0 : table.min_q(next, dst);
      table.update(cur, dst, next, remaining);
      cur = next;
      visited.insert(cur);
      hops++;
    }
    if (cfg.adaptive) {
      recent.push_back(static_cast<double>(hops));
      while (recent.size() > cfg.variance_window) recent.pop_front();
    }
  }
  table.set_alpha(cfg.alpha);
  return table;
}

RouteResult route_packet(const RoutingTopology& topo, QTable& qtable, RouteMode mode,
                         AgentId src, AgentId dst, uint32_t bfs_distance,
                         const RolloutConfig& cfg, DetRng& rng) {
  RouteResult res;
  res.path.push_back(src);
  if (src == dst) {
    res.success = true;
    return res;
  }

  const uint32_t budget = cfg.hop_budget_factor * std::max<uint32_t>(1, bfs_distance);
  AgentId cur = src;
  std::set<AgentId> visited{cur};

  while (cur != dst && res.hops < budget) {
    AgentId next = 0;
    if (mode == RouteMode::kStatic) {
      next = route_hop(topo, qtable, cur, dst, RouteMode::kStatic);
    } else {
      // Exploration only within the first bfs_distance hops keeps the worst
      // case inside the budget; afterwards the walk is greedy and avoids
      // revisits.
      bool may_explore = res.hops < bfs_distance;
      if (may_explore && cfg.epsilon > 0.0 && rng.bernoulli(cfg.epsilon)) {
        double floor = qtable.min_q(cur, dst);
        std::vector<AgentId> near;
        for (AgentId nb : topo.neighbors(cur))
          if (qtable.q(cur, dst, nb) <= floor + 1.0) near.push_back(nb);
        next = near[rng.uniform(0, near.size() - 1)];
      } else {
        next = greedy_min_q(topo, qtable, cur, dst, visited);
      }
      if (cfg.online_updates) {
        double remaining = (next == dst) ? 0.0 : qtable.min_q(next, dst);
        qtable.update(cur, dst, next, remaining);
      }
    }
    cur = next;
    visited.insert(cur);
    res.path.push_back(cur);
    res.hops++;
  }
  res.success = (cur == dst);
  return res;
}

}  // namespace dcs
