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

#include "dcs/parallel.hpp"
#include "test_support.hpp"

using namespace dcs;

TEST_CASE("parallel sweep equals the serial reference element for element") {
  Scenario s = make_random_scenario(13, 5, 25, 10);
  std::vector<uint64_t> seeds = seed_range(1, 40);

  auto serial = run_seeds_serial(s, seeds);
  auto parallel = run_seeds_parallel(s, seeds);

  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].trace_digest == parallel[i].trace_digest);
    CHECK(serial[i].trace == parallel[i].trace);
    CHECK(serial[i].global_dag == parallel[i].global_dag);
    CHECK(serial[i].converged() == parallel[i].converged());
  }
}

TEST_CASE("run_seeds dispatches to either path") {
  Scenario s = fig6a_scenario();
  std::vector<uint64_t> seeds = seed_range(5, 6);
  auto a = run_seeds(s, seeds, {}, false);
  auto b = run_seeds(s, seeds, {}, true);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].trace_digest == b[i].trace_digest);
}

TEST_CASE("errors inside parallel runs propagate") {
  Scenario s = fig6a_scenario();
  s.config_overrides["drop"] = "2.0";  // invalid, caught by config validation
  CHECK_THROWS_AS(run_seeds_parallel(s, seed_range(1, 4)), ConfigError);
}

TEST_CASE("seed ranges are contiguous") {
  auto seeds = seed_range(10, 3);
  CHECK(seeds == std::vector<uint64_t>{10, 11, 12});
}
