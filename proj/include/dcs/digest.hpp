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

#ifndef DCS_DIGEST_HPP_
#define DCS_DIGEST_HPP_

#include <array>
#include <string>
#include <string_view>

#include "dcs/bytes.hpp"

namespace dcs {

// The digest algorithm is fixed per build and recorded in log headers.
inline constexpr const char* kDigestAlgorithm = "sha256";

using Digest256 = std::array<uint8_t, 32>;

Digest256 sha256(const Bytes& data);
Digest256 sha256(std::string_view data);

std::string digest_hex(const Digest256& d);
Digest256 digest_from_hex(std::string_view hex);

}  // namespace dcs

#endif  // DCS_DIGEST_HPP_
