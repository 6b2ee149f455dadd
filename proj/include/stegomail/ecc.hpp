#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stegomail/error.hpp"

namespace stegomail {

// Bit string with one element per bit, each 0 or 1.
using BitString = std::vector<std::uint8_t>;

// Most significant bit of each byte first.
inline BitString bits_from_bytes(const std::vector<std::uint8_t>& bytes) {
  BitString bits;
  bits.reserve(bytes.size() * 8);
  for (auto b : bytes)
    for (int i = 7; i >= 0; --i) bits.push_back(static_cast<std::uint8_t>((b >> i) & 1u));
  return bits;
}

inline std::vector<std::uint8_t> bytes_from_bits(const BitString& bits) {
  if (bits.size() % 8 != 0) throw FramingError("bit string length " + std::to_string(bits.size()) + " is not a whole number of bytes");
  std::vector<std::uint8_t> bytes(bits.size() / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) bytes[i / 8] = static_cast<std::uint8_t>(bytes[i / 8] << 1 | (bits[i] & 1u));
  return bytes;
}

// Repetition code: every bit sent r times, decoded by majority. r is odd so
// a block never ties.
class RepetitionCode {
 public:
  static constexpr unsigned kDefaultRepetition = 5;

  explicit RepetitionCode(unsigned r = kDefaultRepetition) : r_(r) {
    if (r_ == 0 || r_ % 2 == 0) throw ConfigError("repetition factor must be odd and positive, got " + std::to_string(r_));
  }

  unsigned repetition() const { return r_; }

  BitString encode(const BitString& m) const {
    BitString out;
    out.reserve(m.size() * r_);
    for (auto b : m) out.insert(out.end(), r_, b);
    return out;
  }

  BitString decode(const BitString& c) const {
    if (c.size() % r_ != 0) {
      throw FramingError("code word length " + std::to_string(c.size()) + " is not a multiple of " + std::to_string(r_));
    }
    BitString out;
    out.reserve(c.size() / r_);
    for (std::size_t i = 0; i < c.size(); i += r_) {
      unsigned ones = 0;
      for (std::size_t j = 0; j < r_; ++j) ones += c[i + j];
      out.push_back(ones > r_ / 2 ? 1 : 0);
    }
    return out;
  }

 private:
  unsigned r_;
};

inline BitString enc(const BitString& m, unsigned r = RepetitionCode::kDefaultRepetition) { return RepetitionCode(r).encode(m); }
inline BitString dec(const BitString& c, unsigned r = RepetitionCode::kDefaultRepetition) { return RepetitionCode(r).decode(c); }

}  // namespace stegomail
