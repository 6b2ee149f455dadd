#include "stegomail/prf.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "stegomail/error.hpp"
#include "stegomail/rng.hpp"

using namespace stegomail;

namespace {

BitFunction keyed(std::uint64_t seed) {
  Rng rng(seed);
  return BitFunction::keyed(Key::random(rng));
}

}  // namespace

TEST(Prf, EvalBitIsDeterministic) {
  const auto fn = keyed(1);
  const auto oracle = BitFunction::random_oracle(2);
  for (std::uint64_t id = 0; id < 64; ++id) {
    EXPECT_EQ(eval_bit(fn, Document(id)), eval_bit(fn, Document(id)));
    EXPECT_EQ(eval_bit(oracle, Document(id)), eval_bit(oracle, Document(id)));
  }
}

TEST(Prf, RandomOracleIsAFairCoin) {
  const auto oracle = BitFunction::random_oracle(9);
  int ones = 0;
  for (std::uint64_t id = 0; id < 10000; ++id) ones += eval_bit(oracle, Document(id));
  EXPECT_NEAR(ones / 10000.0, 0.5, 0.02);
}

TEST(Prf, DistinctKeysAgreeHalfTheTime) {
  const auto f = keyed(100);
  const auto g = keyed(101);
  int agree = 0;
  for (std::uint64_t id = 0; id < 1000; ++id) agree += eval_bit(f, Document(id)) == eval_bit(g, Document(id));
  EXPECT_NEAR(agree / 1000.0, 0.5, 0.05);
}

TEST(Prf, KeyedMatchesHmacSha256LowBit) {
  // F_K(c) = lsb(HMAC-SHA256(K, "F1" || be64(id)))
  const auto key = Key::from_hex("000102030405060708090a0b0c0d0e0f");
  const auto fn = BitFunction::keyed(key);
  const Document d(5);
  Bytes msg{'F', '1', 0, 0, 0, 0, 0, 0, 0, 5};
  unsigned char mac[crypto_auth_hmacsha256_BYTES];
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.bytes().data(), key.bytes().size());
  crypto_auth_hmacsha256_update(&st, msg.data(), msg.size());
  crypto_auth_hmacsha256_final(&st, mac);
  EXPECT_EQ(eval_bit(fn, d), mac[31] & 1);
}

TEST(Prf, SyncBitIsDeterministic) {
  const auto fn = keyed(4);
  for (std::uint64_t n = 0; n < 32; ++n)
    EXPECT_EQ(eval_bit_sync(fn, Counter(n), Document(3)), eval_bit_sync(fn, Counter(n), Document(3)));
}

TEST(Prf, OracleBitsForConsecutiveCountersAreIndependent) {
  const auto oracle = BitFunction::random_oracle(5);
  const Document d(42);
  int agree = 0;
  for (std::uint64_t n = 0; n < 10000; ++n) agree += eval_bit_sync(oracle, Counter(n), d) == eval_bit_sync(oracle, Counter(n + 1), d);
  EXPECT_NEAR(agree / 10000.0, 0.5, 0.02);
}

// NIST SP 800-22 frequency (monobit) test on F_K(N, d) for N = 0..10^4.
TEST(Prf, KeyedCounterSequencePassesMonobit) {
  const auto fn = keyed(6);
  const Document d(7);
  const int n = 10001;
  int sum = 0;
  for (int i = 0; i < n; ++i) sum += eval_bit_sync(fn, Counter(static_cast<std::uint64_t>(i)), d) ? 1 : -1;
  const double p = std::erfc(std::abs(sum) / std::sqrt(2.0 * n));
  EXPECT_GE(p, 0.01);
}

TEST(Prf, TupleEvaluation) {
  const auto fn = keyed(8);
  const std::vector<Document> single{Document(3)};
  EXPECT_EQ(eval_bit_tuple(fn, single), eval_bit_tuple(fn, single));
  EXPECT_EQ(eval_bit_tuple(fn, single), eval_bit(fn, Document(3)));
  EXPECT_THROW(eval_bit_tuple(fn, std::vector<Document>{}), ConfigError);
}

TEST(Prf, ReversedTuplesAreIndependentOracleInputs) {
  const auto oracle = BitFunction::random_oracle(10);
  int agree = 0;
  const int pairs = 10000;
  for (int i = 0; i < pairs; ++i) {
    const std::vector<Document> ab{Document(2 * i), Document(2 * i + 1)};
    const std::vector<Document> ba{Document(2 * i + 1), Document(2 * i)};
    agree += eval_bit_tuple(oracle, ab) == eval_bit_tuple(oracle, ba);
  }
  EXPECT_NEAR(agree / double(pairs), 0.5, 0.02);
}

TEST(Prf, RandomTriplesAreBalanced) {
  const auto fn = keyed(11);
  Rng rng(12);
  int ones = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::vector<Document> t{Document(rng.below(1 << 20)), Document(rng.below(1 << 20)), Document(rng.below(1 << 20))};
    ones += eval_bit_tuple(fn, t);
  }
  EXPECT_NEAR(ones / 10000.0, 0.5, 0.02);
}

// Exhaustive collision search: every (N, d) with N, d < 2^8, every single
// document, and every tuple of length 2..3 over a 2^4 alphabet encode to
// pairwise distinct byte strings.
TEST(PrfProperty, InputEncodingsAreInjective) {
  std::set<Bytes> seen;
  std::size_t expected = 0;
  for (std::uint64_t d = 0; d < 256; ++d) {
    seen.insert(encoding::single(Document(d)));
    ++expected;
    for (std::uint64_t n = 0; n < 256; ++n) {
      seen.insert(encoding::synchronized(Counter(n), Document(d)));
      ++expected;
    }
  }
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      seen.insert(encoding::tuple(std::vector<Document>{Document(a), Document(b)}));
      ++expected;
      for (std::uint64_t c = 0; c < 16; ++c) {
        seen.insert(encoding::tuple(std::vector<Document>{Document(a), Document(b), Document(c)}));
        ++expected;
      }
    }
  }
  EXPECT_EQ(seen.size(), expected);
}

TEST(PrfProperty, OracleIsAFunctionUnderInterleaving) {
  const auto oracle = BitFunction::random_oracle(13);
  const auto copy = oracle;
  Rng rng(14);
  std::vector<Bit> first(200);
  for (std::uint64_t i = 0; i < 200; ++i) first[i] = eval_bit_sync(oracle, Counter(i), Document(i % 7));
  for (int round = 0; round < 2000; ++round) {
    const auto i = rng.below(200);
    const auto& who = round % 2 ? oracle : copy;
    EXPECT_EQ(eval_bit_sync(who, Counter(i), Document(i % 7)), first[i]);
    eval_bit(who, Document(rng.below(1000)));
  }
}

TEST(Prf, OracleAssignPinsValues) {
  auto oracle = BitFunction::random_oracle(15);
  oracle.assign(encoding::single(Document(1)), 1);
  oracle.assign(encoding::single(Document(2)), 0);
  EXPECT_EQ(eval_bit(oracle, Document(1)), 1);
  EXPECT_EQ(eval_bit(oracle, Document(2)), 0);
  auto fn = keyed(1);
  EXPECT_THROW(fn.assign(encoding::single(Document(1)), 1), ConfigError);
}

TEST(Counter, IncrementAndOverflow) {
  Counter n(5);
  n.increment();
  EXPECT_EQ(n.value(), 6u);
  n.advance(10);
  EXPECT_EQ(n.value(), 16u);

  Counter top(255, 8);
  EXPECT_THROW(top.increment(), CounterError);
  Counter wide(~std::uint64_t{0});
  EXPECT_THROW(wide.increment(), CounterError);
  EXPECT_THROW(Counter(256, 8), ConfigError);
  EXPECT_THROW(Counter(250, 8).advance(6), CounterError);
}

TEST(Counter, EncodingIsFixedWidthBigEndian) {
  Bytes out;
  Counter(0x0102, 16).append_bytes(out);
  EXPECT_EQ(out, (Bytes{1, 2}));
  out.clear();
  Counter(1).append_bytes(out);
  EXPECT_EQ(out, (Bytes{0, 0, 0, 0, 0, 0, 0, 1}));
}

TEST(Key, HexRoundTripAndLength) {
  const auto k = Key::from_hex("00112233445566778899AABBCCDDEEFF");
  EXPECT_EQ(k.bit_length(), 128u);
  EXPECT_EQ(k.to_hex(), "00112233445566778899aabbccddeeff");
  EXPECT_THROW(Key::from_hex("0011"), ConfigError);
  EXPECT_THROW(Key::from_hex("0011223344556677zz"), ConfigError);
  EXPECT_THROW(Key::from_hex("001"), ConfigError);
  EXPECT_EQ(Key::from_hex("0011223344556677").bit_length(), 64u);
}
