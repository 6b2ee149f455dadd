#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <sodium.h>

#include "stegomail/channel.hpp"
#include "stegomail/error.hpp"
#include "stegomail/rng.hpp"

namespace stegomail {

using Bit = std::uint8_t;

// Secret key K in {0,1}^k. k is a multiple of 8 and at least 64.
class Key {
 public:
  static constexpr std::size_t kDefaultBits = 128;

  explicit Key(Bytes bytes) : bytes_(std::move(bytes)) {
    if (bytes_.size() * 8 < 64) throw ConfigError("key must be at least 64 bits");
  }

  static Key random(Rng& rng, std::size_t bits = kDefaultBits) {
    if (bits % 8 != 0) throw ConfigError("key length must be a multiple of 8 bits");
    Bytes b(bits / 8);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next() >> 56);
    return Key(std::move(b));
  }

  static Key from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw ConfigError("key hex has odd length");
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    Bytes b;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
      const int hi = nibble(hex[i]);
      const int lo = nibble(hex[i + 1]);
      if (hi < 0 || lo < 0) throw ConfigError("key is not a hex string");
      b.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return Key(std::move(b));
  }

  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (auto x : bytes_) {
      s.push_back(digits[x >> 4]);
      s.push_back(digits[x & 0xf]);
    }
    return s;
  }

  std::size_t bit_length() const { return bytes_.size() * 8; }
  const Bytes& bytes() const { return bytes_; }

 private:
  Bytes bytes_;
};

// Synchronized counter N in {0,1}^n.
class Counter {
 public:
  explicit Counter(std::uint64_t value = 0, unsigned width = 64) : value_(value), width_(width) {
    if (width_ == 0 || width_ > 64) throw ConfigError("counter width must be in [1, 64]");
    if (value_ > max()) throw ConfigError("counter value does not fit its width");
  }

  std::uint64_t value() const { return value_; }
  unsigned width() const { return width_; }
  std::uint64_t max() const { return width_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width_) - 1; }

  // Wrapping back to 0 would reuse PRF inputs, so it is an error.
  void increment() {
    if (value_ == max()) throw CounterError("synchronized counter overflow");
    ++value_;
  }

  void advance(std::uint64_t steps) {
    if (max() - value_ < steps) throw CounterError("synchronized counter overflow");
    value_ += steps;
  }

  Counter plus(std::uint64_t steps) const {
    Counter c = *this;
    c.advance(steps);
    return c;
  }

  // Fixed-width big-endian encoding, ceil(width/8) bytes.
  void append_bytes(Bytes& out) const {
    const unsigned nbytes = (width_ + 7) / 8;
    for (int i = static_cast<int>(nbytes) - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(value_ >> (8 * i)));
  }

  friend bool operator==(const Counter&, const Counter&) = default;

 private:
  std::uint64_t value_;
  unsigned width_;
};

// PRF input encodings. Each signature gets its own two-byte domain tag.
namespace encoding {

inline Bytes single(const Document& d) {
  Bytes out{'F', '1'};
  const auto c = d.canonical_bytes();
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

inline Bytes synchronized(const Counter& n, const Document& d) {
  Bytes out{'F', '2'};
  n.append_bytes(out);
  const auto c = d.canonical_bytes();
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

// A one-document tuple encodes exactly like `single`, so tuple evaluation
// with t = 1 coincides with F_K(c).
inline Bytes tuple(std::span<const Document> docs) {
  if (docs.empty()) throw ConfigError("PRF tuple input must be nonempty");
  if (docs.size() == 1) return single(docs.front());
  Bytes out{'F', '3'};
  for (const auto& d : docs) {
    const auto c = d.canonical_bytes();
    const std::uint64_t len = c.size();
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(len >> shift));
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

}  // namespace encoding

enum class PrfMode { keyed, random_oracle };

// One-bit function family. Keyed mode is HMAC-SHA256 truncated to the least
// significant bit; random_oracle mode is a lazily sampled truly random
// function. Copies of a random_oracle BitFunction share one table, so a
// sender and a receiver holding copies see the same function.
//
// The oracle table is not synchronized: concurrent queries on one random
// oracle need external serialization.
class BitFunction {
 public:
  static BitFunction keyed(const Key& key) {
    if (sodium_init() < 0) throw Error("libsodium initialization failed");
    BitFunction fn;
    fn.mode_ = PrfMode::keyed;
    fn.key_ = key;
    auto st = std::make_shared<crypto_auth_hmacsha256_state>();
    crypto_auth_hmacsha256_init(st.get(), key.bytes().data(), key.bytes().size());
    fn.hmac_ = std::move(st);
    return fn;
  }

  static BitFunction random_oracle(std::uint64_t seed) {
    BitFunction fn;
    fn.mode_ = PrfMode::random_oracle;
    fn.table_ = std::make_shared<Table>(seed);
    return fn;
  }

  PrfMode mode() const { return mode_; }
  const std::optional<Key>& key() const { return key_; }

  Bit eval(std::span<const std::uint8_t> input) const {
    if (mode_ == PrfMode::keyed) {
      crypto_auth_hmacsha256_state st = *hmac_;
      unsigned char mac[crypto_auth_hmacsha256_BYTES];
      crypto_auth_hmacsha256_update(&st, input.data(), input.size());
      crypto_auth_hmacsha256_final(&st, mac);
      return static_cast<Bit>(mac[crypto_auth_hmacsha256_BYTES - 1] & 1u);
    }
    auto& t = *table_;
    auto [it, fresh] = t.bits.try_emplace(std::string(input.begin(), input.end()), Bit{0});
    if (fresh) it->second = static_cast<Bit>(t.rng.bit());
    return it->second;
  }

  // Fix the oracle's value on one input before it is first queried.
  // Only meaningful in random_oracle mode; used to build specific functions
  // for tests and worked examples.
  void assign(std::span<const std::uint8_t> input, Bit b) {
    if (mode_ != PrfMode::random_oracle) throw ConfigError("only a random oracle can be assigned values");
    table_->bits[std::string(input.begin(), input.end())] = b;
  }

  std::size_t oracle_size() const { return table_ ? table_->bits.size() : 0; }

 private:
  struct Table {
    explicit Table(std::uint64_t seed) : rng(seed) {}
    Rng rng;
    std::unordered_map<std::string, Bit> bits;
  };

  BitFunction() = default;

  PrfMode mode_ = PrfMode::keyed;
  std::optional<Key> key_;
  std::shared_ptr<const crypto_auth_hmacsha256_state> hmac_;
  std::shared_ptr<Table> table_;
};

// F_K(c)
inline Bit eval_bit(const BitFunction& fn, const Document& d) { return fn.eval(encoding::single(d)); }

// F_K(N, c)
inline Bit eval_bit_sync(const BitFunction& fn, const Counter& n, const Document& d) {
  return fn.eval(encoding::synchronized(n, d));
}

// F_K(x_1 x_2 ... x_t)
inline Bit eval_bit_tuple(const BitFunction& fn, std::span<const Document> docs) { return fn.eval(encoding::tuple(docs)); }

}  // namespace stegomail
