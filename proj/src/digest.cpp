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

#include "dcs/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace dcs {

namespace {

Digest256 sha256_raw(const void* data, size_t len) {
  Digest256 out{};
  unsigned int out_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
  bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
            EVP_DigestUpdate(ctx, data, len) == 1 &&
            EVP_DigestFinal_ex(ctx, out.data(), &out_len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok || out_len != out.size()) throw std::runtime_error("sha256 failed");
  return out;
}

}  // namespace

Digest256 sha256(const Bytes& data) { return sha256_raw(data.data(), data.size()); }

Digest256 sha256(std::string_view data) { return sha256_raw(data.data(), data.size()); }

std::string digest_hex(const Digest256& d) {
  return to_hex(Bytes(d.begin(), d.end()));
}

Digest256 digest_from_hex(std::string_view hex) {
  Bytes b = from_hex(hex);
  if (b.size() != 32) throw std::invalid_argument("digest_from_hex: need 64 hex chars");
  Digest256 d{};
  std::copy(b.begin(), b.end(), d.begin());
  return d;
}

}  // namespace dcs
