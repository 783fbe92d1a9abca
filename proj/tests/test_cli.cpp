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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dcs/artifacts.hpp"
#include "dcs/violations.hpp"

namespace fs = std::filesystem;
using namespace dcs;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  std::string cmd = std::string(DCS_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CommandResult res;
  char buf[4096];
  while (fgets(buf, sizeof(buf), pipe) != nullptr) res.output += buf;
  int status = pclose(pipe);
  res.exit_code = WEXITSTATUS(status);
  return res;
}

fs::path temp_dir(const std::string& stem) {
  fs::path dir = fs::temp_directory_path() / ("dcs-cli-test-" + stem);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string scenario_path(const std::string& name) {
  return (fs::path(DCS_SCENARIO_DIR) / name).string();
}

}  // namespace

TEST_CASE("simulate writes a reproducible artifact tree") {
  fs::path out = temp_dir("simulate");
  CommandResult r = run_cli("simulate --scenario " + scenario_path("fig6a.scn") +
                            " --seed 5 --out " + (out / "run").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("seed 5") != std::string::npos);
  for (const char* name : {"manifest.txt", "trace.log", "contributions.log", "states.tsv",
                           "dag.txt", "dag.dot"})
    CHECK(fs::exists(out / "run" / name));

  std::ifstream states(out / "run" / "states.tsv");
  std::string table((std::istreambuf_iterator<char>(states)),
                    std::istreambuf_iterator<char>());
  CHECK(table.find("gset:{x,y}") != std::string::npos);

  // Same manifest, byte-identical tree.
  CommandResult again = run_cli("simulate --scenario " + scenario_path("fig6a.scn") +
                                " --seed 5 --out " + (out / "run2").string());
  CHECK(again.exit_code == 0);
  CHECK(tree_digest(out / "run") == tree_digest(out / "run2"));
  fs::remove_all(out);
}

TEST_CASE("simulate rejects a missing scenario file") {
  CommandResult r = run_cli("simulate --scenario /nonexistent/sc.scn");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("scenario not found") != std::string::npos);
}

TEST_CASE("verify accepts lawful logs and compares a pair") {
  fs::path out = temp_dir("verify");
  run_cli("simulate --scenario builtin:ordering-matrix --seed 9 --out " +
          (out / "a").string());
  run_cli("simulate --scenario builtin:ordering-matrix --seed 10 --policy reordering "
          "--out " + (out / "b").string());

  CommandResult single = run_cli("verify " + (out / "a" / "contributions.log").string());
  CHECK(single.exit_code == 0);
  CHECK(single.output.find("OK: sealed DAG") != std::string::npos);

  CommandResult pair = run_cli("verify " + (out / "a" / "contributions.log").string() +
                               " " + (out / "b" / "contributions.log").string());
  CHECK(pair.exit_code == 0);
  CHECK(pair.output.find("ISOMORPHIC") == 0);
  CHECK(pair.output.find("OBSERVATIONALLY EQUIVALENT") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("verify reports a forged cycle") {
  fs::path out = temp_dir("cycle");
  std::ofstream log(out / "forged.log");
  Contribution c1 = Contribution::forge(fig5_rid(1), 1, 0, "k", {fig5_rid(2)},
                                        SemilatticeValue::gset({"r1"}));
  Contribution c2 = Contribution::forge(fig5_rid(2), 2, 0, "k", {fig5_rid(1)},
                                        SemilatticeValue::gset({"r2"}));
  log << log_header() << "\n" << log_record(c1) << "\n" << log_record(c2) << "\n";
  log.close();

  CommandResult r = run_cli("verify " + (out / "forged.log").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("CycleDetected") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("replay re-runs a manifest and confirms byte identity") {
  fs::path out = temp_dir("replay");
  run_cli("simulate --scenario builtin:crash-stop --seed 21 --config drop=0.35 --out " +
          (out / "run").string());
  CommandResult r = run_cli("replay " + (out / "run").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("REPLAY OK") != std::string::npos);

  // Corrupt one artifact: replay must notice.
  std::ofstream(out / "run" / "states.tsv", std::ios::app) << "tampered\n";
  CommandResult bad = run_cli("replay " + (out / "run").string());
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("MISMATCH") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("separation and prop1-check subcommands pass") {
  CommandResult sep = run_cli("separation");
  CHECK(sep.exit_code == 0);
  CHECK(sep.output.find("non-isomorphic") != std::string::npos);

  CommandResult prop1 = run_cli("prop1-check --pairs 20 --seed 3");
  CHECK(prop1.exit_code == 0);
  CHECK(prop1.output.find("PASS") != std::string::npos);
}

TEST_CASE("ambiguity table at reduced trials") {
  fs::path out = temp_dir("ambiguity");
  CommandResult r = run_cli("ambiguity --trials 3 --seed 4 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0%") != std::string::npos);
  CHECK(r.output.find("100%") != std::string::npos);
  CHECK(fs::exists(out / "ambiguity.tsv"));
  std::ifstream tsv(out / "ambiguity.tsv");
  std::string first_line;
  std::getline(tsv, first_line);
  CHECK(first_line.rfind("#manifest=", 0) == 0);
  fs::remove_all(out);
}

TEST_CASE("violation-mode simulate surfaces the failure class") {
  CommandResult r = run_cli("simulate --scenario builtin:fig1-partition --mode no-fairness");
  CHECK(r.exit_code == 0);  // quiescent run, divergence visible in the table
  CHECK(r.output.find("gset:{}") != std::string::npos);
  CHECK(r.output.find("gset:{a_r}") != std::string::npos);
}

TEST_CASE("unknown subcommand fails") {
  CommandResult r = run_cli("frobnicate");
  CHECK(r.exit_code != 0);
}
