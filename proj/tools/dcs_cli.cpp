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

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dcs/artifacts.hpp"
#include "dcs/experiments.hpp"
#include "dcs/parallel.hpp"

namespace fs = std::filesystem;
using namespace dcs;

namespace {

std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& kvs) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const std::string& kv : kvs) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--config wants key=value, got '" + kv + "'");
    out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return out;
}

void emit_report(const ExperimentReport& report, const std::string& manifest_digest,
                 const std::string& out_dir, const std::string& stem) {
  std::cout << report.text();
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file_atomic(fs::path(out_dir) / (stem + ".txt"), report.text());
    write_file_atomic(fs::path(out_dir) / (stem + ".tsv"), report.machine(manifest_digest));
  }
}

std::string meta_digest(const std::string& label, uint64_t seed) {
  RunManifest m;
  m.scenario_ref = "builtin:" + label;
  m.scenario_name = label;
  m.seed = seed;
  return m.digest();
}

int cmd_simulate(const std::string& scenario_ref, uint64_t seed,
                 const std::vector<std::string>& config_kvs, const std::string& mode,
                 const std::string& policy, const std::string& out_dir) {
  RunManifest manifest;
  manifest.scenario_ref = scenario_ref;
  manifest.seed = seed;
  manifest.mode = mode;
  manifest.policy = policy;
  manifest.config_overrides = parse_overrides(config_kvs);

  Scenario scenario = resolve_scenario(scenario_ref);
  manifest.scenario_name = scenario.name;

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file_atomic(fs::path(out_dir) / "manifest.txt", manifest.text());
  }

  ExecutionRecord rec = replay_manifest(manifest);
  if (!out_dir.empty()) write_run_artifacts(out_dir, manifest, rec);

  std::cout << "scenario " << scenario.name << " seed " << seed << " policy "
            << rec.policy_tag << " mode " << violation_mode_name(rec.mode) << "\n";
  std::cout << "created " << rec.created.size() << " contributions, "
            << rec.global_dag.size() << " vertices, " << rec.global_dag.edge_count()
            << " edges\n";
  std::cout << (rec.quiescent ? "quiescent" : "NON-QUIESCENT: " + rec.note) << "\n";
  std::cout << states_table_text(rec);
  if (rec.structural_ambiguity) std::cout << "structural ambiguity: " << rec.note << "\n";
  if (rec.ill_defined) std::cout << "ill-defined graph (rid collision)\n";
  if (rec.cycle_detected) std::cout << "cycle detected\n";
  if (!out_dir.empty()) std::cout << "artifacts in " << out_dir << "\n";
  return rec.quiescent ? 0 : 1;
}

int audit_single_log(const fs::path& path) {
  auto records = load_contribution_log(path);
  std::map<Rid, Contribution> known;
  ProvenanceDag dag;
  int findings = 0;
  for (const Contribution& c : records) {
    ValidationReport report = validate_contribution(c, known);
    for (const Finding& f : report.findings) {
      std::cout << finding_kind_name(f.kind) << ": " << f.rid.short_hex() << " "
                << f.detail << "\n";
      findings++;
    }
    if (report.ok()) known.emplace(c.rid(), c);
    try {
      dag.insert(c);
    } catch (const DcsError& e) {
      std::cout << e.what() << "\n";
      findings++;
    }
  }
  if (!dag.sealed()) {
    DagDelta delta = dag.pending();
    std::cout << "UnsealedDag: " << delta.pending.size() << " records buffered, "
              << delta.dangling.size() << " dangling parents\n";
    findings++;
  }
  if (findings == 0) {
    std::cout << "OK: sealed DAG, " << dag.size() << " vertices, " << dag.edge_count()
              << " edges, acyclic\n";
    return 0;
  }
  std::cout << findings << " finding(s)\n";
  return 1;
}

int cmd_verify(const std::string& log_a, const std::string& log_b) {
  if (log_b.empty()) return audit_single_log(log_a);
  ProvenanceDag g1 = dag_from_contributions(load_contribution_log(log_a));
  ProvenanceDag g2 = dag_from_contributions(load_contribution_log(log_b));
  IsomorphismResult iso = isomorphic(g1, g2);
  std::cout << (iso.isomorphic ? "ISOMORPHIC" : "NOT ISOMORPHIC") << "\n";
  EquivalenceResult eq = observationally_equivalent(g1, g2);
  if (eq.equivalent) {
    std::cout << "OBSERVATIONALLY EQUIVALENT\n";
  } else {
    std::cout << "OBSERVATIONALLY DISTINGUISHABLE: " << eq.witness->describe() << "\n";
  }
  return (iso.isomorphic && eq.equivalent) ? 0 : 1;
}

int cmd_replay(const std::string& dir) {
  fs::path run_dir(dir);
  std::ifstream in(run_dir / "manifest.txt");
  if (!in) throw ConfigError("no manifest.txt in " + dir);
  std::ostringstream buf;
  buf << in.rdbuf();
  RunManifest manifest = RunManifest::parse(buf.str());

  ExecutionRecord rec = replay_manifest(manifest);
  fs::path tmp = run_dir / ".replay";
  fs::remove_all(tmp);
  write_run_artifacts(tmp, manifest, rec);

  bool ok = true;
  for (const char* name : {"manifest.txt", "trace.log", "contributions.log", "states.tsv",
                           "dag.txt", "dag.dot"}) {
    auto read = [](const fs::path& p) {
      std::ifstream f(p, std::ios::binary);
      std::ostringstream b;
      b << f.rdbuf();
      return b.str();
    };
    if (read(run_dir / name) != read(tmp / name)) {
      std::cout << "MISMATCH: " << name << "\n";
      ok = false;
    }
  }
  fs::remove_all(tmp);
  std::cout << (ok ? "REPLAY OK: byte-identical artifacts" : "REPLAY FAILED") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic causal structure simulator"};
  app.require_subcommand(1);

  std::string scenario_ref = "builtin:fig6a";
  uint64_t seed = 1;
  uint32_t n_seeds = 100;
  std::vector<std::string> config_kvs;
  std::string mode = "lawful";
  std::string policy;
  std::string out_dir;
  std::string log_a, log_b;
  uint32_t trials = 100;
  uint32_t tasks = 500;
  uint32_t pairs = 200;
  uint32_t runs = 50;

  auto* sim = app.add_subcommand("simulate", "run a scenario and write artifacts");
  sim->add_option("--scenario", scenario_ref, "scenario file or builtin:<name>");
  sim->add_option("--seed", seed, "run seed (printed; default 1)");
  sim->add_option("--config", config_kvs, "config override key=value")->take_all();
  sim->add_option("--mode", mode, "violation mode (default lawful)");
  sim->add_option("--policy", policy, "ordering policy override");
  sim->add_option("--out", out_dir, "artifact output directory");

  auto* verify = app.add_subcommand("verify", "audit a contribution log (or compare two)");
  verify->add_option("log", log_a, "contribution log")->required();
  verify->add_option("log_b", log_b, "second log for comparison");

  auto* replay = app.add_subcommand("replay", "re-run a manifest and compare artifacts");
  replay->add_option("dir", out_dir, "run directory with manifest.txt")->required();

  auto* amb = app.add_subcommand("ambiguity", "axiom-violation ambiguity table");
  amb->add_option("--trials", trials, "trial pairs per row");
  amb->add_option("--seed", seed, "seed stream");
  amb->add_option("--out", out_dir, "also write table files here");

  auto* matrix = app.add_subcommand("policy-matrix", "policy-agnosticism matrix");
  matrix->add_option("--runs", runs, "ordering-policy runs");
  matrix->add_option("--tasks", tasks, "routing tasks");
  matrix->add_option("--seed", seed, "seed");
  matrix->add_option("--out", out_dir, "also write table files here");

  auto* perf = app.add_subcommand("performance", "routing policy characteristics table");
  perf->add_option("--tasks", tasks, "routing tasks");
  perf->add_option("--seed", seed, "seed");
  perf->add_option("--out", out_dir, "also write table and q-table here");

  auto* sep = app.add_subcommand("separation", "value convergence vs structural identity");
  sep->add_option("--seed", seed, "seed");
  sep->add_option("--out", out_dir, "also write table files here");

  auto* prop1 = app.add_subcommand("prop1-check", "observational equivalence iff isomorphism");
  prop1->add_option("--pairs", pairs, "generated pairs");
  prop1->add_option("--seed", seed, "seed");
  prop1->add_option("--out", out_dir, "also write table files here");

  auto* sweep = app.add_subcommand("sweep", "theorem-1 convergence sweep");
  sweep->add_option("--scenario", scenario_ref, "scenario file or builtin:<name>");
  sweep->add_option("--seeds", n_seeds, "number of seeds");
  sweep->add_option("--seed", seed, "first seed");
  sweep->add_option("--out", out_dir, "also write table files here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(scenario_ref, seed, config_kvs, mode, policy, out_dir);
    if (verify->parsed()) return cmd_verify(log_a, log_b);
    if (replay->parsed()) return cmd_replay(out_dir);

    if (amb->parsed()) {
      ExperimentReport r = ambiguity_report(trials, seed);
      emit_report(r, meta_digest("ambiguity", seed), out_dir, "ambiguity");
      return r.all_pass() ? 0 : 1;
    }
    if (matrix->parsed()) {
      ExperimentReport ordering = theorem_two_ordering(
          ordering_matrix_scenario(), {"fifo", "batching:2", "reordering"}, runs, seed);
      RoutingStudy study = run_routing_study(tasks, seed);
      ExperimentReport routing = routing_matrix_report(study);
      emit_report(ordering, meta_digest("policy-matrix", seed), out_dir,
                  "policy_matrix_ordering");
      emit_report(routing, meta_digest("policy-matrix", seed), out_dir,
                  "policy_matrix_routing");
      return (ordering.all_pass() && routing.all_pass()) ? 0 : 1;
    }
    if (perf->parsed()) {
      RoutingStudy study = run_routing_study(tasks, seed);
      ExperimentReport r = performance_report(study);
      emit_report(r, meta_digest("performance", seed), out_dir, "performance");
      if (!out_dir.empty())
        write_file_atomic(fs::path(out_dir) / "qtable.txt", study.qtable_text);
      return r.all_pass() ? 0 : 1;
    }
    if (sep->parsed()) {
      ExperimentReport r = crdt_separation(seed);
      emit_report(r, meta_digest("separation", seed), out_dir, "separation");
      return r.all_pass() ? 0 : 1;
    }
    if (prop1->parsed()) {
      ExperimentReport r = proposition_one_check(pairs, 8, seed);
      emit_report(r, meta_digest("prop1", seed), out_dir, "prop1");
      return r.all_pass() ? 0 : 1;
    }
    if (sweep->parsed()) {
      Scenario scenario = resolve_scenario(scenario_ref);
      ExperimentReport r = theorem_one_sweep(scenario, n_seeds, seed);
      emit_report(r, meta_digest("sweep", seed), out_dir, "sweep");
      return r.all_pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
