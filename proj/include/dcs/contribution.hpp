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

#ifndef DCS_CONTRIBUTION_HPP_
#define DCS_CONTRIBUTION_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dcs/digest.hpp"
#include "dcs/semilattice.hpp"

namespace dcs {

// Agents are indexed 1..n.
using AgentId = uint32_t;

// Content-addressed contribution identifier. The lawful scheme derives it
// from the full record, so identical inputs give identical rids and any
// post-hoc metadata edit is detectable as a digest mismatch.
struct Rid {
  Digest256 bytes{};

  auto operator<=>(const Rid&) const = default;

  std::string hex() const { return digest_hex(bytes); }
  std::string short_hex() const { return hex().substr(0, 10); }
  static Rid from_hex(std::string_view h) { return Rid{digest_from_hex(h)}; }
};

using RidSet = std::set<Rid>;

// key -> state space tag. Frozen before a run starts.
class KeySpaces {
 public:
  void bind(const std::string& key, const std::string& space_tag);
  bool has(const std::string& key) const { return binding_.count(key) != 0; }
  const std::string& space_for(const std::string& key) const;
  const std::map<std::string, std::string>& bindings() const { return binding_; }

 private:
  std::map<std::string, std::string> binding_;
};

// Immutable interaction record: (rid, parents, payload, key) plus the
// creator identity and a creator-local sequence number that disambiguates
// same-content records. No mutating surface exists; every field is fixed at
// construction.
class Contribution {
 public:
  const Rid& rid() const { return rid_; }
  const RidSet& parents() const { return parents_; }
  const SemilatticeValue& payload() const { return payload_; }
  const std::string& key() const { return key_; }
  AgentId creator() const { return creator_; }
  uint64_t creator_seq() const { return creator_seq_; }

  bool operator==(const Contribution&) const = default;

  // The lawful rid: digest over creator, sequence, key, sorted parents and
  // the payload's canonical bytes.
  static Rid compute_rid(AgentId creator, uint64_t creator_seq, const std::string& key,
                         const RidSet& parents, const SemilatticeValue& payload);

  // Constructs a record with an arbitrary rid and no checks. This is the
  // violation injectors' entry point; lawful code never calls it.
  static Contribution forge(Rid rid, AgentId creator, uint64_t creator_seq,
                            std::string key, RidSet parents, SemilatticeValue payload);

 private:
  Contribution(Rid rid, AgentId creator, uint64_t creator_seq, std::string key,
               RidSet parents, SemilatticeValue payload);

  friend Contribution make_contribution(AgentId, uint64_t, const std::string&,
                                        const RidSet&, SemilatticeValue,
                                        const RidSet&, const KeySpaces&);

  Rid rid_;
  AgentId creator_;
  uint64_t creator_seq_;
  std::string key_;
  RidSet parents_;
  SemilatticeValue payload_;
};

// Lawful constructor. Enforces causal well-formedness (parents must already
// be observed by the creator) and the key's state space binding.
// Throws CausalViolation or StateSpaceMismatch.
Contribution make_contribution(AgentId creator, uint64_t creator_seq,
                               const std::string& key, const RidSet& parents,
                               SemilatticeValue payload, const RidSet& observed,
                               const KeySpaces& spaces);

// Receiver-side audit findings. Report-style: callers decide what to do.
enum class FindingKind {
  kRidCollision,    // rid already known with different content
  kSelfParent,      // record lists itself as a parent
  kDigestMismatch,  // rid differs from the recomputed digest (metadata edit)
};

struct Finding {
  FindingKind kind;
  Rid rid;
  std::string detail;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const { return findings.empty(); }
};

std::string finding_kind_name(FindingKind k);

ValidationReport validate_contribution(const Contribution& c,
                                       const std::map<Rid, Contribution>& known);

// Log record format, one record per line:
//   rid=<hex> creator=<n> seq=<n> key=<key> parents=<hex,...|-> space=<tag> payload=<hex>
// Field order is fixed and parents are sorted, so a log line is a pure
// function of the record.
std::string log_record(const Contribution& c);
Contribution parse_log_record(std::string_view line);
std::string log_header();

// Keys must be non-empty tokens over [A-Za-z0-9_.-] so log lines and
// scenario files stay whitespace-delimited.
bool valid_key(std::string_view key);

}  // namespace dcs

#endif  // DCS_CONTRIBUTION_HPP_
