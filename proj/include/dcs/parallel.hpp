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

#ifndef DCS_PARALLEL_HPP_
#define DCS_PARALLEL_HPP_

#include "dcs/network_sim.hpp"

namespace dcs {

// Seed sweeps: independent runs of one scenario under many seeds. Each run's
// event loop stays single-threaded for determinism; the sweep is the
// data-parallel layer. The serial version is the reference; the parallel
// version must produce element-for-element identical records, and the
// benchmark tool compares their wall time.

std::vector<ExecutionRecord> run_seeds_serial(const Scenario& scenario,
                                              const std::vector<uint64_t>& seeds,
                                              const RunOptions& options = {});

// OpenMP over seeds when available, otherwise falls back to the serial path.
std::vector<ExecutionRecord> run_seeds_parallel(const Scenario& scenario,
                                                const std::vector<uint64_t>& seeds,
                                                const RunOptions& options = {});

std::vector<ExecutionRecord> run_seeds(const Scenario& scenario,
                                       const std::vector<uint64_t>& seeds,
                                       const RunOptions& options = {},
                                       bool parallel = true);

std::vector<uint64_t> seed_range(uint64_t seed0, uint32_t count);

}  // namespace dcs

#endif  // DCS_PARALLEL_HPP_
