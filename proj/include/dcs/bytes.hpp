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

#ifndef DCS_BYTES_HPP_
#define DCS_BYTES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dcs {

using Bytes = std::vector<uint8_t>;

// Canonical encodings are fixed-width big-endian. Every value that feeds a
// digest or a log record goes through ByteWriter so the byte layout has a
// single definition.
class ByteWriter {
 public:
  void u8(uint8_t v) { out_.push_back(v); }

  void u32(uint32_t v) {
    out_.push_back(static_cast<uint8_t>(v >> 24));
    out_.push_back(static_cast<uint8_t>(v >> 16));
    out_.push_back(static_cast<uint8_t>(v >> 8));
    out_.push_back(static_cast<uint8_t>(v));
  }

  void u64(uint64_t v) {
    u32(static_cast<uint32_t>(v >> 32));
    u32(static_cast<uint32_t>(v));
  }

  // Two's complement, so ordering is not preserved bytewise; values are
  // compared after decoding, never as raw bytes.
  void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }

  void str(std::string_view s) {
    u32(static_cast<uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
  }

  void raw(const Bytes& b) { out_.insert(out_.end(), b.begin(), b.end()); }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(const Bytes& b) : data_(b) {}

  uint8_t u8() { return data_.at(pos_++); }

  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
    return v;
  }

  uint64_t u64() {
    uint64_t v = static_cast<uint64_t>(u32()) << 32;
    return v | u32();
  }

  int64_t i64() { return static_cast<int64_t>(u64()); }

  std::string str() {
    uint32_t n = u32();
    if (pos_ + n > data_.size()) throw std::out_of_range("ByteReader: truncated string");
    std::string s(data_.begin() + static_cast<long>(pos_), data_.begin() + static_cast<long>(pos_ + n));
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  const Bytes& data_;
  size_t pos_ = 0;
};

inline std::string to_hex(const Bytes& b) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(b.size() * 2);
  for (uint8_t c : b) {
    s.push_back(digits[c >> 4]);
    s.push_back(digits[c & 0xf]);
  }
  return s;
}

inline int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline Bytes from_hex(std::string_view s) {
  if (s.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
  Bytes b;
  b.reserve(s.size() / 2);
  for (size_t i = 0; i < s.size(); i += 2) {
    int hi = hex_nibble(s[i]);
    int lo = hex_nibble(s[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("from_hex: bad digit");
    b.push_back(static_cast<uint8_t>((hi << 4) | lo));
  }
  return b;
}

}  // namespace dcs

#endif  // DCS_BYTES_HPP_
