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

#include "dcs/semilattice.hpp"

#include <algorithm>
#include <sstream>

namespace dcs {

namespace {

// --- gset ---

SemilatticeValue gset_merge(const SemilatticeValue& a, const SemilatticeValue& b) {
  GSet out = a.as<GSet>();
  const GSet& rhs = b.as<GSet>();
  out.insert(rhs.begin(), rhs.end());
  return SemilatticeValue::gset(std::move(out));
}

Bytes gset_encode(const SemilatticeValue& v) {
  const GSet& s = v.as<GSet>();
  ByteWriter w;
  w.u32(static_cast<uint32_t>(s.size()));
  for (const auto& e : s) w.str(e);  // std::set iterates in sorted order
  return w.take();
}

SemilatticeValue gset_decode(const Bytes& b) {
  ByteReader r(b);
  uint32_t n = r.u32();
  GSet s;
  for (uint32_t i = 0; i < n; ++i) s.insert(r.str());
  if (!r.done()) throw ParseError("gset: trailing bytes");
  return SemilatticeValue::gset(std::move(s));
}

// Splits "a,b,c" honoring nested braces; empty input gives no parts.
std::vector<std::string> split_commas(std::string_view body) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : body) {
    if (c == '{') depth++;
    if (c == '}') depth--;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty() || !parts.empty()) parts.push_back(cur);
  if (depth != 0) throw ParseError("unbalanced braces in value literal");
  return parts;
}

std::string_view strip_braces(std::string_view s) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw ParseError("expected {...} in value literal, got '" + std::string(s) + "'");
  return s.substr(1, s.size() - 2);
}

SemilatticeValue gset_parse(std::string_view body) {
  GSet s;
  for (auto& part : split_commas(strip_braces(body))) {
    if (part.empty()) throw ParseError("empty gset element");
    s.insert(part);
  }
  return SemilatticeValue::gset(std::move(s));
}

std::string gset_print(const SemilatticeValue& v) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& e : v.as<GSet>()) {
    if (!first) os << ',';
    os << e;
    first = false;
  }
  os << '}';
  return os.str();
}

// --- maxint ---

SemilatticeValue maxint_merge(const SemilatticeValue& a, const SemilatticeValue& b) {
  return SemilatticeValue::max_int(std::max(a.as<MaxInt>().value, b.as<MaxInt>().value));
}

Bytes maxint_encode(const SemilatticeValue& v) {
  ByteWriter w;
  w.i64(v.as<MaxInt>().value);
  return w.take();
}

SemilatticeValue maxint_decode(const Bytes& b) {
  ByteReader r(b);
  int64_t x = r.i64();
  if (!r.done()) throw ParseError("maxint: trailing bytes");
  return SemilatticeValue::max_int(x);
}

int64_t parse_i64(std::string_view s) {
  try {
    size_t pos = 0;
    int64_t v = std::stoll(std::string(s), &pos);
    if (pos != s.size()) throw ParseError("trailing characters in integer");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer literal '" + std::string(s) + "'");
  }
}

SemilatticeValue maxint_parse(std::string_view body) {
  return SemilatticeValue::max_int(parse_i64(body));
}

std::string maxint_print(const SemilatticeValue& v) {
  return std::to_string(v.as<MaxInt>().value);
}

// --- gsetmap ---

SemilatticeValue gsetmap_merge(const SemilatticeValue& a, const SemilatticeValue& b) {
  GSetMap out = a.as<GSetMap>();
  for (const auto& [k, s] : b.as<GSetMap>()) out[k].insert(s.begin(), s.end());
  return SemilatticeValue::gset_map(std::move(out));
}

Bytes gsetmap_encode(const SemilatticeValue& v) {
  const GSetMap& m = v.as<GSetMap>();
  ByteWriter w;
  w.u32(static_cast<uint32_t>(m.size()));
  for (const auto& [k, s] : m) {  // std::map iterates keys in sorted order
    w.str(k);
    w.u32(static_cast<uint32_t>(s.size()));
    for (const auto& e : s) w.str(e);
  }
  return w.take();
}

SemilatticeValue gsetmap_decode(const Bytes& b) {
  ByteReader r(b);
  uint32_t n = r.u32();
  GSetMap m;
  for (uint32_t i = 0; i < n; ++i) {
    std::string k = r.str();
    uint32_t cnt = r.u32();
    GSet s;
    for (uint32_t j = 0; j < cnt; ++j) s.insert(r.str());
    m.emplace(std::move(k), std::move(s));
  }
  if (!r.done()) throw ParseError("gsetmap: trailing bytes");
  return SemilatticeValue::gset_map(std::move(m));
}

SemilatticeValue gsetmap_parse(std::string_view body) {
  GSetMap m;
  for (auto& part : split_commas(strip_braces(body))) {
    auto colon = part.find(':');
    if (colon == std::string::npos) throw ParseError("gsetmap entry needs key:{...}");
    std::string key = part.substr(0, colon);
    SemilatticeValue inner = gset_parse(std::string_view(part).substr(colon + 1));
    m.emplace(std::move(key), inner.as<GSet>());
  }
  return SemilatticeValue::gset_map(std::move(m));
}

std::string gsetmap_print(const SemilatticeValue& v) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [k, s] : v.as<GSetMap>()) {
    if (!first) os << ',';
    os << k << ':' << gset_print(SemilatticeValue::gset(s));
    first = false;
  }
  os << '}';
  return os.str();
}

// --- overwrite register (unlawful by construction) ---

SemilatticeValue overwrite_merge_impl(const SemilatticeValue& a, const SemilatticeValue& b) {
  (void)a;
  return b;
}

Bytes overwrite_encode(const SemilatticeValue& v) {
  ByteWriter w;
  w.i64(v.as<OverwriteCell>().value);
  return w.take();
}

SemilatticeValue overwrite_decode(const Bytes& b) {
  ByteReader r(b);
  int64_t x = r.i64();
  if (!r.done()) throw ParseError("overwrite-register: trailing bytes");
  return SemilatticeValue::overwrite(x);
}

SemilatticeValue overwrite_parse(std::string_view body) {
  return SemilatticeValue::overwrite(parse_i64(body));
}

std::string overwrite_print(const SemilatticeValue& v) {
  return std::to_string(v.as<OverwriteCell>().value);
}

}  // namespace

void StateSpaceRegistry::add(StateSpace s) {
  if (spaces_.count(s.tag) != 0)
    throw ConfigError("duplicate state space tag '" + s.tag + "'");
  spaces_.emplace(s.tag, std::move(s));
}

const StateSpace& StateSpaceRegistry::space(const std::string& tag) const {
  auto it = spaces_.find(tag);
  if (it == spaces_.end()) throw UnknownStateSpace("'" + tag + "' is not registered");
  return it->second;
}

std::vector<std::string> StateSpaceRegistry::tags() const {
  std::vector<std::string> out;
  for (const auto& [tag, _] : spaces_) out.push_back(tag);
  return out;
}

std::vector<std::string> StateSpaceRegistry::lawful_tags() const {
  std::vector<std::string> out;
  for (const auto& [tag, s] : spaces_)
    if (s.lawful) out.push_back(tag);
  return out;
}

const StateSpaceRegistry& StateSpaceRegistry::builtin() {
  static const StateSpaceRegistry reg = [] {
    StateSpaceRegistry r;
    r.add({kGSetTag, true, SemilatticeValue::gset({}), gset_merge, gset_encode,
           gset_decode, gset_parse, gset_print});
    r.add({kMaxIntTag, true, SemilatticeValue::max_int(0), maxint_merge,
           maxint_encode, maxint_decode, maxint_parse, maxint_print});
    r.add({kGSetMapTag, true, SemilatticeValue::gset_map({}), gsetmap_merge,
           gsetmap_encode, gsetmap_decode, gsetmap_parse, gsetmap_print});
    r.add({kOverwriteTag, false, SemilatticeValue::overwrite(0), overwrite_merge_impl,
           overwrite_encode, overwrite_decode, overwrite_parse, overwrite_print});
    return r;
  }();
  return reg;
}

SemilatticeValue join(const SemilatticeValue& a, const SemilatticeValue& b) {
  if (a.space() != b.space())
    throw MixedStateSpace("join of '" + a.space() + "' with '" + b.space() + "'");
  return StateSpaceRegistry::builtin().space(a.space()).merge(a, b);
}

bool leq(const SemilatticeValue& a, const SemilatticeValue& b) {
  if (a.space() != b.space())
    throw MixedStateSpace("leq of '" + a.space() + "' with '" + b.space() + "'");
  return join(a, b) == b;
}

SemilatticeValue join_all(const std::string& space_tag,
                          const std::vector<SemilatticeValue>& values) {
  SemilatticeValue acc = StateSpaceRegistry::builtin().space(space_tag).bottom;
  for (const auto& v : values) acc = join(acc, v);
  return acc;
}

SemilatticeValue overwrite_merge(const SemilatticeValue& a, const SemilatticeValue& b) {
  if (a.space() != kOverwriteTag || b.space() != kOverwriteTag)
    throw MixedStateSpace("overwrite_merge is defined only on " + std::string(kOverwriteTag));
  return overwrite_merge_impl(a, b);
}

Bytes canonical_bytes(const SemilatticeValue& v) {
  return StateSpaceRegistry::builtin().space(v.space()).encode(v);
}

SemilatticeValue decode_value(const std::string& tag, const Bytes& bytes) {
  return StateSpaceRegistry::builtin().space(tag).decode(bytes);
}

SemilatticeValue parse_value_literal(std::string_view literal) {
  auto colon = literal.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("value literal needs 'space:body', got '" + std::string(literal) + "'");
  std::string tag(literal.substr(0, colon));
  return StateSpaceRegistry::builtin().space(tag).parse(literal.substr(colon + 1));
}

std::string print_value(const SemilatticeValue& v) {
  return v.space() + ":" + StateSpaceRegistry::builtin().space(v.space()).print(v);
}

}  // namespace dcs
