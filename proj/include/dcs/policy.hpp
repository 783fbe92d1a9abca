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

#ifndef DCS_POLICY_HPP_
#define DCS_POLICY_HPP_

#include <memory>
#include <tuple>

#include "dcs/contribution.hpp"
#include "dcs/rng.hpp"

namespace dcs {

// An operational policy decides how an agent's outgoing records are ordered
// and batched on their way to the network. Policies receive opaque frozen
// records; they may reorder, batch or delay, never edit.
class OperationalPolicy {
 public:
  virtual ~OperationalPolicy() = default;
  virtual std::string tag() const = 0;
  virtual std::vector<std::vector<Contribution>> dispatch(std::vector<Contribution> outbox,
                                                          DetRng& rng) const = 0;
};

class FifoPolicy final : public OperationalPolicy {
 public:
  std::string tag() const override { return "fifo"; }
  std::vector<std::vector<Contribution>> dispatch(std::vector<Contribution> outbox,
                                                  DetRng& rng) const override;
};

class BatchingPolicy final : public OperationalPolicy {
 public:
  explicit BatchingPolicy(size_t batch_size);
  std::string tag() const override { return "batching:" + std::to_string(batch_size_); }
  std::vector<std::vector<Contribution>> dispatch(std::vector<Contribution> outbox,
                                                  DetRng& rng) const override;

 private:
  size_t batch_size_;
};

class ReorderingPolicy final : public OperationalPolicy {
 public:
  std::string tag() const override { return "reordering"; }
  std::vector<std::vector<Contribution>> dispatch(std::vector<Contribution> outbox,
                                                  DetRng& rng) const override;
};

// Runs the policy and verifies the output is a permutation/partition of the
// input: exact multiset preservation, each record bit-identical. Throws
// PolicyTamper otherwise.
std::vector<std::vector<Contribution>> apply_policy(const OperationalPolicy& policy,
                                                    const std::vector<Contribution>& outbox,
                                                    DetRng& rng);

// "fifo" | "batching:N" | "reordering"
std::shared_ptr<const OperationalPolicy> make_policy(const std::string& spec);

// ---------------------------------------------------------------------------
// Routing policies: heterogeneous ways to move a packet across a fixed
// topology. Structurally they are just another operational policy; their hop
// events are recorded as contributions by the routing experiments.

struct RoutingTopology {
  uint32_t n = 0;
  std::vector<std::set<AgentId>> adjacency;  // 1-based, [0] unused

  // Random connected graph: a random spanning tree plus extra edges until
  // edge_count is reached.
  static RoutingTopology random_connected(uint32_t n, size_t edge_target, uint64_t seed);

  const std::set<AgentId>& neighbors(AgentId a) const;
  size_t edge_count() const;
  bool connected() const;

  // All-pairs hop distances by breadth-first search.
  std::vector<std::vector<uint32_t>> bfs_distances() const;
};

// Per-node estimated hop counts: (node, destination, neighbor) -> estimate.
// Entries exist only for real neighbors.
class QTable {
 public:
  QTable(const RoutingTopology& topo, double alpha);

  double q(AgentId node, AgentId dest, AgentId neighbor) const;
  double min_q(AgentId node, AgentId dest) const;

  // Q <- Q + alpha * (1 + observed_remaining - Q). Throws NotNeighbor.
  void update(AgentId node, AgentId dest, AgentId neighbor, double observed_remaining);

  double alpha() const { return alpha_; }
  void set_alpha(double a) { alpha_ = a; }

  std::string export_text() const;

 private:
  const RoutingTopology* topo_;
  double alpha_;
  std::map<std::tuple<AgentId, AgentId, AgentId>, double> q_;
};

enum class RouteMode { kStatic, kQLearning, kAdaptive };
std::string route_mode_name(RouteMode m);

// Single forwarding decision. Static mode follows a deterministically
// tie-broken shortest path; the learned modes pick the argmin-Q neighbor,
// with epsilon-greedy exploration when an rng is supplied.
AgentId route_hop(const RoutingTopology& topo, const QTable& qtable, AgentId current,
                  AgentId dest, RouteMode mode, DetRng* rng = nullptr,
                  double epsilon = 0.0);

struct QRoutingConfig {
  double alpha = 0.5;
  double initial_epsilon = 0.1;  // decays linearly to zero over training
  uint32_t episodes = 10000;
  // Adaptive variant: alpha scaled by the coefficient of variation of recent
  // episode lengths, clamped to [alpha_min, 1].
  bool adaptive = false;
  uint32_t variance_window = 50;
  double alpha_min = 0.1;
};

QTable train_q_routing(const RoutingTopology& topo, const QRoutingConfig& cfg,
                       uint64_t seed);

struct RouteResult {
  std::vector<AgentId> path;  // src first, dst last when successful
  uint32_t hops = 0;
  bool success = false;
};

struct RolloutConfig {
  double epsilon = 0.0;        // residual exploration during evaluation
  bool online_updates = false; // adaptive keeps learning while routing
  uint32_t hop_budget_factor = 4;  // budget = factor * BFS distance
};

// Routes one packet. Exploration is confined to the first BFS-distance hops
// so the total path stays within the hop budget; after that the walk is
// greedy with visited-node avoidance.
RouteResult route_packet(const RoutingTopology& topo, QTable& qtable, RouteMode mode,
                         AgentId src, AgentId dst, uint32_t bfs_distance,
                         const RolloutConfig& cfg, DetRng& rng);

}  // namespace dcs

#endif  // DCS_POLICY_HPP_
