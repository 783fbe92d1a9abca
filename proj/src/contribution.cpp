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

#include "dcs/contribution.hpp"

#include <sstream>

#include "dcs/errors.hpp"

namespace dcs {

void KeySpaces::bind(const std::string& key, const std::string& space_tag) {
  if (!valid_key(key)) throw ConfigError("bad key '" + key + "'");
  StateSpaceRegistry::builtin().space(space_tag);  // must exist
  auto [it, inserted] = binding_.emplace(key, space_tag);
  if (!inserted && it->second != space_tag)
    throw ConfigError("key '" + key + "' rebound to a different space");
}

const std::string& KeySpaces::space_for(const std::string& key) const {
  auto it = binding_.find(key);
  if (it == binding_.end())
    throw StateSpaceMismatch("key '" + key + "' has no registered state space");
  return it->second;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

Contribution::Contribution(Rid rid, AgentId creator, uint64_t creator_seq,
                           std::string key, RidSet parents, SemilatticeValue payload)
    : rid_(rid),
      creator_(creator),
      creator_seq_(creator_seq),
      key_(std::move(key)),
      parents_(std::move(parents)),
      payload_(std::move(payload)) {}

Rid Contribution::compute_rid(AgentId creator, uint64_t creator_seq,
                              const std::string& key, const RidSet& parents,
                              const SemilatticeValue& payload) {
  ByteWriter w;
  w.str("dcs:contribution:v1");
  w.u32(creator);
  w.u64(creator_seq);
  w.str(key);
  w.u32(static_cast<uint32_t>(parents.size()));
  for (const Rid& p : parents) w.raw(Bytes(p.bytes.begin(), p.bytes.end()));
  w.str(payload.space());
  Bytes pb = canonical_bytes(payload);
  w.u32(static_cast<uint32_t>(pb.size()));
  w.raw(pb);
  return Rid{sha256(w.bytes())};
}

Contribution Contribution::forge(Rid rid, AgentId creator, uint64_t creator_seq,
                                 std::string key, RidSet parents,
                                 SemilatticeValue payload) {
  return Contribution(rid, creator, creator_seq, std::move(key), std::move(parents),
                      std::move(payload));
}

Contribution make_contribution(AgentId creator, uint64_t creator_seq,
                               const std::string& key, const RidSet& parents,
                               SemilatticeValue payload, const RidSet& observed,
                               const KeySpaces& spaces) {
  if (!valid_key(key)) throw ConfigError("bad key '" + key + "'");
  const std::string& space = spaces.space_for(key);
  if (payload.space() != space)
    throw StateSpaceMismatch("key '" + key + "' expects space '" + space +
                             "', payload is '" + payload.space() + "'");
  for (const Rid& p : parents) {
    if (observed.count(p) == 0)
      throw CausalViolation("parent " + p.short_hex() +
                            " not observed by creator at creation time");
  }
  Rid rid = Contribution::compute_rid(creator, creator_seq, key, parents, payload);
  return Contribution(rid, creator, creator_seq, key, parents, std::move(payload));
}

std::string finding_kind_name(FindingKind k) {
  switch (k) {
    case FindingKind::kRidCollision: return "RidCollision";
    case FindingKind::kSelfParent: return "SelfParent";
    case FindingKind::kDigestMismatch: return "DigestMismatch";
  }
  return "?";
}

ValidationReport validate_contribution(const Contribution& c,
                                       const std::map<Rid, Contribution>& known) {
  ValidationReport report;
  if (c.parents().count(c.rid()) != 0)
    report.findings.push_back({FindingKind::kSelfParent, c.rid(), "record lists itself as parent"});
  Rid expected = Contribution::compute_rid(c.creator(), c.creator_seq(), c.key(),
                                           c.parents(), c.payload());
  if (expected != c.rid())
    report.findings.push_back({FindingKind::kDigestMismatch, c.rid(),
                               "recomputed digest " + expected.short_hex() +
                                   " differs from claimed rid"});
  auto it = known.find(c.rid());
  if (it != known.end() && !(it->second == c))
    report.findings.push_back({FindingKind::kRidCollision, c.rid(),
                               "rid already known with different content"});
  return report;
}

std::string log_record(const Contribution& c) {
  std::ostringstream os;
  os << "rid=" << c.rid().hex();
  os << " creator=" << c.creator();
  os << " seq=" << c.creator_seq();
  os << " key=" << c.key();
  os << " parents=";
  if (c.parents().empty()) {
    os << '-';
  } else {
    bool first = true;
    for (const Rid& p : c.parents()) {
      if (!first) os << ',';
      os << p.hex();
      first = false;
    }
  }
  os << " space=" << c.payload().space();
  os << " payload=" << to_hex(canonical_bytes(c.payload()));
  return os.str();
}

namespace {

std::string expect_field(std::istringstream& in, const std::string& name) {
  std::string tok;
  if (!(in >> tok)) throw ParseError("log record missing field '" + name + "'");
  std::string prefix = name + "=";
  if (tok.rfind(prefix, 0) != 0)
    throw ParseError("expected field '" + name + "', got '" + tok + "'");
  return tok.substr(prefix.size());
}

}  // namespace

Contribution parse_log_record(std::string_view line) {
  std::istringstream in{std::string(line)};
  Rid rid = Rid::from_hex(expect_field(in, "rid"));
  AgentId creator = static_cast<AgentId>(std::stoul(expect_field(in, "creator")));
  uint64_t seq = std::stoull(expect_field(in, "seq"));
  std::string key = expect_field(in, "key");
  std::string parents_field = expect_field(in, "parents");
  RidSet parents;
  if (parents_field != "-") {
    size_t start = 0;
    while (start <= parents_field.size()) {
      size_t comma = parents_field.find(',', start);
      std::string part = parents_field.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (part.empty()) throw ParseError("empty parent entry");
      parents.insert(Rid::from_hex(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  std::string space = expect_field(in, "space");
  Bytes payload_bytes = from_hex(expect_field(in, "payload"));
  SemilatticeValue payload = decode_value(space, payload_bytes);
  std::string extra;
  if (in >> extra) throw ParseError("trailing token '" + extra + "' in log record");
  return Contribution::forge(rid, creator, seq, std::move(key), std::move(parents),
                             std::move(payload));
}

std::string log_header() {
  return std::string("# dcs-log v1 digest=") + kDigestAlgorithm + " build=" + DCS_BUILD_ID;
}

}  // namespace dcs
