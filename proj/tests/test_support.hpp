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

#ifndef DCS_TESTS_TEST_SUPPORT_HPP_
#define DCS_TESTS_TEST_SUPPORT_HPP_

#include <string>
#include <vector>

#include "dcs/rng.hpp"
#include "dcs/semilattice.hpp"

namespace dcs::testing {

inline SemilatticeValue random_gset(DetRng& rng) {
  GSet s;
  size_t n = rng.uniform(0, 4);
  for (size_t i = 0; i < n; ++i)
    s.insert(std::string(1, static_cast<char>('a' + rng.uniform(0, 7))));
  return SemilatticeValue::gset(std::move(s));
}

inline SemilatticeValue random_maxint(DetRng& rng) {
  return SemilatticeValue::max_int(static_cast<int64_t>(rng.uniform(0, 1000)) - 500);
}

inline SemilatticeValue random_gsetmap(DetRng& rng) {
  GSetMap m;
  size_t n = rng.uniform(0, 3);
  for (size_t i = 0; i < n; ++i) {
    std::string key = "k" + std::to_string(rng.uniform(0, 3));
    GSet s;
    size_t cnt = rng.uniform(0, 3);
    for (size_t j = 0; j < cnt; ++j)
      s.insert(std::string(1, static_cast<char>('a' + rng.uniform(0, 5))));
    m[key].insert(s.begin(), s.end());
  }
  return SemilatticeValue::gset_map(std::move(m));
}

inline SemilatticeValue random_value(const std::string& space, DetRng& rng) {
  if (space == kGSetTag) return random_gset(rng);
  if (space == kMaxIntTag) return random_maxint(rng);
  if (space == kGSetMapTag) return random_gsetmap(rng);
  return SemilatticeValue::overwrite(static_cast<int64_t>(rng.uniform(0, 100)));
}

// All subsets of {a, b, c}: the brute-force lattice for exhaustive checks.
inline std::vector<SemilatticeValue> subset_lattice_abc() {
  const std::vector<std::string> ground = {"a", "b", "c"};
  std::vector<SemilatticeValue> out;
  for (int mask = 0; mask < 8; ++mask) {
    GSet s;
    for (int bit = 0; bit < 3; ++bit)
      if (mask & (1 << bit)) s.insert(ground[bit]);
    out.push_back(SemilatticeValue::gset(std::move(s)));
  }
  return out;
}

}  // namespace dcs::testing

#endif  // DCS_TESTS_TEST_SUPPORT_HPP_
