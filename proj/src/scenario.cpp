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

#include "dcs/scenario.hpp"

#include <fstream>
#include <sstream>

#include "dcs/errors.hpp"
#include "dcs/rng.hpp"

namespace dcs {

std::set<AgentId> Scenario::relevant(const std::string& key) const {
  auto it = rel.find(key);
  if (it != rel.end()) return it->second;
  std::set<AgentId> all;
  for (AgentId a = 1; a <= n_agents; ++a) all.insert(a);
  return all;
}

void Scenario::validate() const {
  if (n_agents == 0) throw ConfigError("scenario '" + name + "' has no agents");
  for (const auto& [key, agents] : rel) {
    key_spaces.space_for(key);
    for (AgentId a : agents)
      if (a < 1 || a > n_agents)
        throw ConfigError("rel for '" + key + "' names agent " + std::to_string(a));
  }
  for (size_t i = 0; i < intents.size(); ++i) {
    const ScenarioIntent& in = intents[i];
    if (in.agent < 1 || in.agent > n_agents)
      throw ConfigError("intent " + std::to_string(i + 1) + " names agent " +
                        std::to_string(in.agent));
    const std::string& space = key_spaces.space_for(in.key);
    if (in.payload.space() != space)
      throw ConfigError("intent " + std::to_string(i + 1) + " payload space '" +
                        in.payload.space() + "' does not match key '" + in.key + "'");
    if (relevant(in.key).count(in.agent) == 0)
      throw ConfigError("intent " + std::to_string(i + 1) + ": agent " +
                        std::to_string(in.agent) + " not in Rel(" + in.key + ")");
    for (size_t ref : in.parents.intent_refs) {
      if (ref >= i)
        throw ConfigError("intent " + std::to_string(i + 1) +
                          " references a later or same intent");
    }
  }
  for (const auto& [a, _] : crash_ticks)
    if (a < 1 || a > n_agents)
      throw ConfigError("crash names agent " + std::to_string(a));
}

namespace {

uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    uint64_t v = std::stoull(s, &pos);
    if (pos != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad " + what + " '" + s + "'");
  }
}

std::map<std::string, std::string> kv_pairs(std::istringstream& in) {
  std::map<std::string, std::string> out;
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok + "'");
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

std::vector<size_t> parse_intent_refs(const std::string& list, size_t current) {
  std::vector<size_t> refs;
  std::istringstream in(list);
  std::string part;
  while (std::getline(in, part, ',')) {
    uint64_t n = parse_u64(part, "intent reference");
    if (n == 0 || n > current)
      throw ParseError("intent reference " + part + " out of range");
    refs.push_back(static_cast<size_t>(n - 1));  // file uses 1-based intent numbers
  }
  if (refs.empty()) throw ParseError("empty intent reference list");
  return refs;
}

ParentSpec parse_parent_spec(const std::string& text, size_t current_intent) {
  if (text == "empty") return ParentSpec::empty();
  if (text == "frontier") return ParentSpec::frontier();
  if (text.rfind("explicit:", 0) == 0)
    return ParentSpec::explicit_intents(parse_intent_refs(text.substr(9), current_intent));
  if (text.rfind("first-of:", 0) == 0)
    return ParentSpec::first_observed_of(parse_intent_refs(text.substr(9), current_intent));
  throw ParseError("unknown parent rule '" + text + "'");
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::istringstream lines{std::string(text)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(lines, line)) {
    lineno++;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string directive;
    if (!(in >> directive)) continue;
    try {
      if (directive == "name") {
        in >> s.name;
      } else if (directive == "agents") {
        std::string n;
        in >> n;
        s.n_agents = static_cast<uint32_t>(parse_u64(n, "agent count"));
      } else if (directive == "key") {
        std::string key, space;
        if (!(in >> key >> space)) throw ParseError("key needs: key <name> <space>");
        s.key_spaces.bind(key, space);
      } else if (directive == "rel") {
        std::string key;
        if (!(in >> key)) throw ParseError("rel needs a key");
        std::string a;
        while (in >> a) s.rel[key].insert(static_cast<AgentId>(parse_u64(a, "agent id")));
      } else if (directive == "intent") {
        auto kv = kv_pairs(in);
        ScenarioIntent intent;
        intent.tick = parse_u64(kv.at("tick"), "tick");
        intent.agent = static_cast<AgentId>(parse_u64(kv.at("agent"), "agent"));
        intent.key = kv.at("key");
        intent.payload = parse_value_literal(kv.at("payload"));
        intent.parents = parse_parent_spec(kv.count("parents") ? kv.at("parents") : "empty",
                                           s.intents.size());
        s.intents.push_back(std::move(intent));
      } else if (directive == "crash") {
        auto kv = kv_pairs(in);
        s.crash_ticks[static_cast<AgentId>(parse_u64(kv.at("agent"), "agent"))] =
            parse_u64(kv.at("tick"), "tick");
      } else if (directive == "config") {
        auto kv = kv_pairs(in);
        for (auto& [k, v] : kv) s.config_overrides[k] = v;
      } else if (directive == "policy") {
        in >> s.policy_spec;
      } else {
        throw ParseError("unknown directive '" + directive + "'");
      }
    } catch (const std::out_of_range&) {
      throw ParseError("line " + std::to_string(lineno) + ": missing required field");
    } catch (const DcsError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (s.name.empty()) throw ParseError("scenario has no name");
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario not found: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Scenario fig6a_scenario() {
  Scenario s;
  s.name = "fig6a";
  s.n_agents = 2;
  s.key_spaces.bind("k", kGSetTag);
  s.intents.push_back({1, 1, "k", SemilatticeValue::gset({"x"}), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back({1, 2, "k", SemilatticeValue::gset({"y"}), ParentSpec::empty(), {}, {}, {}});
  s.config_overrides["bound"] = "10";
  s.validate();
  return s;
}

// Same two records as fig6a but causally chained: the {y} root is created
// first and the {x} contribution names it as parent once it has arrived.
Scenario fig6b_scenario() {
  Scenario s;
  s.name = "fig6b";
  s.n_agents = 2;
  s.key_spaces.bind("k", kGSetTag);
  s.intents.push_back({1, 2, "k", SemilatticeValue::gset({"y"}), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back(
      {20, 1, "k", SemilatticeValue::gset({"x"}), ParentSpec::frontier(), {}, {}, {}});
  s.config_overrides["bound"] = "10";
  s.validate();
  return s;
}

// Agent 3 creates one record; the network never lets agent 2 see it and
// fairness is off, so agent 2 stays at bottom.
Scenario fig1_partition_scenario() {
  Scenario s;
  s.name = "fig1-partition";
  s.n_agents = 3;
  s.key_spaces.bind("k", kGSetTag);
  s.intents.push_back(
      {1, 3, "k", SemilatticeValue::gset({"a_r"}), ParentSpec::empty(), {}, {}, {}});
  s.config_overrides["fairness"] = "off";
  s.config_overrides["block"] = "3-2,1-2";
  s.validate();
  return s;
}

// Scripted multi-contribution groups so ordering policies have something to
// reorder and batch. Cross-agent parent references leave at least a fairness
// bound of slack, so the contribution set is identical for every seed and
// policy.
Scenario ordering_matrix_scenario() {
  Scenario s;
  s.name = "ordering-matrix";
  s.n_agents = 4;
  s.key_spaces.bind("k", kGSetTag);
  auto g = [](std::string e) { return SemilatticeValue::gset({std::move(e)}); };
  // intents 0..2: agent 1, tick 1, chained
  s.intents.push_back({1, 1, "k", g("a0"), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back({1, 1, "k", g("a1"), ParentSpec::explicit_intents({0}), {}, {}, {}});
  s.intents.push_back({1, 1, "k", g("a2"), ParentSpec::explicit_intents({1}), {}, {}, {}});
  // intents 3..4: agent 2, tick 1
  s.intents.push_back({1, 2, "k", g("b0"), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back({1, 2, "k", g("b1"), ParentSpec::explicit_intents({3}), {}, {}, {}});
  // intent 5: agent 3 at tick 20 joins both chains
  s.intents.push_back({20, 3, "k", g("c0"), ParentSpec::explicit_intents({0, 3}), {}, {}, {}});
  // intents 6..7: agent 4 at tick 20
  s.intents.push_back({20, 4, "k", g("d0"), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back({20, 4, "k", g("d1"), ParentSpec::explicit_intents({6, 2}), {}, {}, {}});
  // intent 8: agent 1 at tick 40 closes over the middle layer
  s.intents.push_back({40, 1, "k", g("e0"), ParentSpec::explicit_intents({5, 7}), {}, {}, {}});
  s.config_overrides["drop"] = "0.3";
  s.config_overrides["dup"] = "0.3";
  s.config_overrides["reorder"] = "3";
  s.config_overrides["bound"] = "12";
  s.validate();
  return s;
}

// Agent 3 crashes before creating anything; convergence is quantified over
// the agents that remain.
Scenario crash_scenario() {
  Scenario s;
  s.name = "crash-stop";
  s.n_agents = 3;
  s.key_spaces.bind("k", kGSetTag);
  s.intents.push_back({1, 1, "k", SemilatticeValue::gset({"p"}), ParentSpec::empty(), {}, {}, {}});
  s.intents.push_back(
      {20, 2, "k", SemilatticeValue::gset({"q"}), ParentSpec::explicit_intents({0}), {}, {}, {}});
  s.crash_ticks[3] = 0;
  s.config_overrides["drop"] = "0.2";
  s.config_overrides["reorder"] = "2";
  s.config_overrides["bound"] = "10";
  s.validate();
  return s;
}

Scenario make_random_scenario(uint64_t gen_seed, uint32_t n_agents,
                              uint32_t n_contributions, uint64_t fairness_bound) {
  Scenario s;
  s.name = "random-" + std::to_string(gen_seed) + "-" + std::to_string(n_agents) + "x" +
           std::to_string(n_contributions);
  s.n_agents = n_agents;
  const std::vector<std::string> keys = {"alpha", "beta"};
  for (const auto& k : keys) s.key_spaces.bind(k, kGSetTag);

  DetRng rng(mix_u64({gen_seed, n_agents, n_contributions}));
  const uint64_t gap = 3;
  for (uint32_t i = 0; i < n_contributions; ++i) {
    ScenarioIntent in;
    in.tick = 1 + gap * i;
    in.agent = static_cast<AgentId>(rng.uniform(1, n_agents));
    in.key = keys[rng.uniform(0, keys.size() - 1)];
    in.payload = SemilatticeValue::gset({"v" + std::to_string(i)});

    // Candidate parents: same-key intents this agent made itself, or ones old
    // enough that the fairness bound has delivered them everywhere.
    std::vector<size_t> candidates;
    for (size_t j = 0; j < s.intents.size(); ++j) {
      const ScenarioIntent& prev = s.intents[j];
      if (prev.key != in.key) continue;
      if (prev.agent == in.agent || in.tick > prev.tick + fairness_bound + 1)
        candidates.push_back(j);
    }
    rng.shuffle(candidates);
    size_t take = candidates.empty() ? 0 : rng.uniform(0, std::min<size_t>(2, candidates.size()));
    if (take == 0) {
      in.parents = ParentSpec::empty();
    } else {
      in.parents = ParentSpec::explicit_intents(
          std::vector<size_t>(candidates.begin(), candidates.begin() + take));
    }
    s.intents.push_back(std::move(in));
  }
  s.config_overrides["drop"] = "0.25";
  s.config_overrides["dup"] = "0.25";
  s.config_overrides["reorder"] = "3";
  s.config_overrides["bound"] = std::to_string(fairness_bound);
  s.validate();
  return s;
}

std::optional<Scenario> builtin_scenario(const std::string& name) {
  if (name == "fig6a") return fig6a_scenario();
  if (name == "fig6b") return fig6b_scenario();
  if (name == "fig1-partition") return fig1_partition_scenario();
  if (name == "ordering-matrix") return ordering_matrix_scenario();
  if (name == "crash-stop") return crash_scenario();
  if (name == "random") return make_random_scenario(1, 5, 20, 10);
  return std::nullopt;
}

std::vector<std::string> builtin_scenario_names() {
  return {"fig6a", "fig6b", "fig1-partition", "ordering-matrix", "crash-stop", "random"};
}

}  // namespace dcs
