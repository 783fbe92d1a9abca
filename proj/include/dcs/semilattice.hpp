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

#ifndef DCS_SEMILATTICE_HPP_
#define DCS_SEMILATTICE_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dcs/bytes.hpp"
#include "dcs/errors.hpp"

namespace dcs {

// Payload state spaces. A key's state lives in exactly one registered space;
// each lawful space's merge is a join (associative, commutative, idempotent,
// inflationary, with a bottom element). The overwrite register is registered
// too but is deliberately not a semilattice; it exists so the merge-law
// violation can be driven through the same machinery.

using GSet = std::set<std::string>;
using GSetMap = std::map<std::string, GSet>;

struct MaxInt {
  int64_t value = 0;
  auto operator<=>(const MaxInt&) const = default;
};

// Last-writer-wins cell. Merge keeps the right argument, so the outcome
// depends on arrival order.
struct OverwriteCell {
  int64_t value = 0;
  auto operator<=>(const OverwriteCell&) const = default;
};

inline constexpr const char* kGSetTag = "gset";
inline constexpr const char* kMaxIntTag = "maxint";
inline constexpr const char* kGSetMapTag = "gsetmap";
inline constexpr const char* kOverwriteTag = "overwrite-register";

class SemilatticeValue {
 public:
  using Payload = std::variant<GSet, MaxInt, GSetMap, OverwriteCell>;

  SemilatticeValue() : space_(kGSetTag), payload_(GSet{}) {}
  SemilatticeValue(std::string space, Payload payload)
      : space_(std::move(space)), payload_(std::move(payload)) {}

  static SemilatticeValue gset(GSet elems) {
    return SemilatticeValue(kGSetTag, std::move(elems));
  }
  static SemilatticeValue max_int(int64_t v) {
    return SemilatticeValue(kMaxIntTag, MaxInt{v});
  }
  static SemilatticeValue gset_map(GSetMap m) {
    return SemilatticeValue(kGSetMapTag, std::move(m));
  }
  static SemilatticeValue overwrite(int64_t v) {
    return SemilatticeValue(kOverwriteTag, OverwriteCell{v});
  }

  const std::string& space() const { return space_; }
  const Payload& payload() const { return payload_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(payload_);
  }

  // Structural equality; identical to equality of canonical bytes.
  bool operator==(const SemilatticeValue&) const = default;
  bool operator!=(const SemilatticeValue&) const = default;

 private:
  std::string space_;
  Payload payload_;
};

struct StateSpace {
  std::string tag;
  bool lawful = true;  // merge satisfies the join-semilattice laws
  SemilatticeValue bottom;
  SemilatticeValue (*merge)(const SemilatticeValue&, const SemilatticeValue&) = nullptr;
  Bytes (*encode)(const SemilatticeValue&) = nullptr;
  SemilatticeValue (*decode)(const Bytes&) = nullptr;
  SemilatticeValue (*parse)(std::string_view) = nullptr;
  std::string (*print)(const SemilatticeValue&) = nullptr;
};

class StateSpaceRegistry {
 public:
  void add(StateSpace s);
  bool has(const std::string& tag) const { return spaces_.count(tag) != 0; }
  const StateSpace& space(const std::string& tag) const;
  std::vector<std::string> tags() const;
  std::vector<std::string> lawful_tags() const;

  // Built once, read-only afterwards.
  static const StateSpaceRegistry& builtin();

 private:
  std::map<std::string, StateSpace> spaces_;
};

// Least upper bound under the value's registered space. Throws
// MixedStateSpace when the operands' tags differ. For the overwrite register
// this dispatches to the last-writer-wins merge, which is not a join.
SemilatticeValue join(const SemilatticeValue& a, const SemilatticeValue& b);

// Order induced by join: a <= b iff a `join` b == b.
bool leq(const SemilatticeValue& a, const SemilatticeValue& b);

// Fold of join over the collection; the empty fold is the space's bottom.
SemilatticeValue join_all(const std::string& space_tag,
                          const std::vector<SemilatticeValue>& values);

// Last-writer-wins merge, only defined on the overwrite register space.
SemilatticeValue overwrite_merge(const SemilatticeValue& a, const SemilatticeValue& b);

// Canonical byte encoding: sorted set elements, fixed-width integers, sorted
// map keys. Bit-exact; rid digests consume these bytes.
Bytes canonical_bytes(const SemilatticeValue& v);
SemilatticeValue decode_value(const std::string& tag, const Bytes& bytes);

// Literal form used by scenario files and reports, e.g. "gset:{x,y}",
// "maxint:7", "gsetmap:{k1:{a},k2:{b,c}}", "overwrite-register:2".
SemilatticeValue parse_value_literal(std::string_view literal);
std::string print_value(const SemilatticeValue& v);

}  // namespace dcs

#endif  // DCS_SEMILATTICE_HPP_
