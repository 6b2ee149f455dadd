#include "stegomail/ecc.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stegomail/error.hpp"
#include "stegomail/rng.hpp"

using namespace stegomail;

TEST(Repetition, Encode) {
  EXPECT_EQ(enc({1}, 5), (BitString{1, 1, 1, 1, 1}));
  EXPECT_EQ(enc({}, 5), BitString{});
  EXPECT_EQ(enc({1, 0}, 3), (BitString{1, 1, 1, 0, 0, 0}));
}

TEST(Repetition, DecodeByMajority) {
  EXPECT_EQ(dec({1, 1, 0, 1, 1}, 5), BitString{1});
  EXPECT_EQ(dec({0, 0, 1, 1, 0, 1}, 3), (BitString{0, 1}));
}

TEST(Repetition, RejectsEvenFactorAndBadFraming) {
  EXPECT_THROW(RepetitionCode(4), ConfigError);
  EXPECT_THROW(RepetitionCode(0), ConfigError);
  EXPECT_THROW(dec({1, 1, 1, 1}, 5), FramingError);
}

TEST(Repetition, RoundTripExhaustiveUpTo12Bits) {
  for (unsigned len = 0; len <= 12; ++len) {
    for (std::uint32_t v = 0; v < (1u << len); ++v) {
      BitString m(len);
      for (unsigned i = 0; i < len; ++i) m[i] = (v >> i) & 1u;
      ASSERT_EQ(dec(enc(m, 5), 5), m);
    }
  }
}

TEST(RepetitionProperty, RoundTripRandomMessages) {
  Rng rng(1);
  for (int round = 0; round < 200; ++round) {
    const unsigned r = 1 + 2 * static_cast<unsigned>(rng.below(5));
    BitString m(rng.below(1001));
    for (auto& b : m) b = rng.bit();
    ASSERT_EQ(dec(enc(m, r), r), m);
  }
}

// Every flip pattern with at most two flips inside a 5-bit block is
// corrected; every pattern with three or more is not.
TEST(RepetitionProperty, CorrectsUpToTwoFlipsPerBlockOfFive) {
  for (std::uint8_t b : {std::uint8_t{0}, std::uint8_t{1}}) {
    for (std::uint32_t pattern = 0; pattern < 32; ++pattern) {
      auto c = enc({b}, 5);
      for (int i = 0; i < 5; ++i) c[i] ^= (pattern >> i) & 1u;
      const bool correctable = __builtin_popcount(pattern) <= 2;
      EXPECT_EQ(dec(c, 5) == BitString{b}, correctable) << "pattern " << pattern;
    }
  }
}

TEST(Repetition, DecodeFailureUnderQuarterFlipNoise) {
  const double expected = oracle::binomial_tail_bruteforce(5, 0.25, 3);
  EXPECT_NEAR(expected, 106.0 / 1024.0, 1e-12);

  Rng rng(3);
  int failures = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    const std::uint8_t b = rng.bit();
    auto c = enc({b}, 5);
    for (auto& x : c) x ^= rng.below(4) == 0 ? 1 : 0;
    failures += dec(c, 5)[0] != b;
  }
  EXPECT_NEAR(failures / double(trials), expected, 0.01);
}

TEST(Bits, BytesAreMostSignificantBitFirst) {
  EXPECT_EQ(bits_from_bytes({0x80, 0x01}), (BitString{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}));
  const std::vector<std::uint8_t> bytes{0xde, 0xad, 0xbe, 0xef};
  EXPECT_EQ(bytes_from_bits(bits_from_bytes(bytes)), bytes);
  EXPECT_THROW(bytes_from_bits({1, 0, 1}), FramingError);
}
