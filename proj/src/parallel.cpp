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

#include "dcs/parallel.hpp"

#include <exception>

namespace dcs {

std::vector<uint64_t> seed_range(uint64_t seed0, uint32_t count) {
  std::vector<uint64_t> seeds;
  seeds.reserve(count);
  for (uint32_t i = 0; i < count; ++i) seeds.push_back(seed0 + i);
  return seeds;
}

std::vector<ExecutionRecord> run_seeds_serial(const Scenario& scenario,
                                              const std::vector<uint64_t>& seeds,
                                              const RunOptions& options) {
  std::vector<ExecutionRecord> out;
  out.reserve(seeds.size());
  for (uint64_t s : seeds) out.push_back(run_simulation(scenario, s, options));
  return out;
}

std::vector<ExecutionRecord> run_seeds_parallel(const Scenario& scenario,
                                                const std::vector<uint64_t>& seeds,
                                                const RunOptions& options) {
  std::vector<ExecutionRecord> out(seeds.size());
  std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(seeds.size()); ++i) {
    try {
      out[static_cast<size_t>(i)] =
          run_simulation(scenario, seeds[static_cast<size_t>(i)], options);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }

  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<ExecutionRecord> run_seeds(const Scenario& scenario,
                                       const std::vector<uint64_t>& seeds,
                                       const RunOptions& options, bool parallel) {
  return parallel ? run_seeds_parallel(scenario, seeds, options)
                  : run_seeds_serial(scenario, seeds, options);
}

}  // namespace dcs
