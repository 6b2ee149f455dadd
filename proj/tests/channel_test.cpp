#include "stegomail/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "stegomail/error.hpp"
#include "stegomail/rng.hpp"

using namespace stegomail;

namespace {

std::vector<double> frequencies(const ChannelSpec& spec, const History& h, std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> f(spec.alphabet_size(), 0.0);
  for (std::size_t i = 0; i < draws; ++i) f[sample(spec, h, rng).id] += 1.0;
  for (auto& x : f) x /= static_cast<double>(draws);
  return f;
}

ChannelSpec two_state_markov() { return ChannelSpec::markov1({0.5, 0.5}, {{0.9, 0.1}, {0.9, 0.1}}); }

}  // namespace

TEST(Channel, UniformSamplingIsBalanced) {
  const auto f = frequencies(ChannelSpec::uniform(4), History{}, 10000, 11);
  for (double x : f) EXPECT_NEAR(x, 0.25, 0.02);
}

TEST(Channel, PointMassAlwaysReturnsItsDocument) {
  const auto spec = ChannelSpec::stationary({1.0, 0.0, 0.0, 0.0});
  Rng rng(3);
  History h({Document(2), Document(3)});
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample(spec, h, rng).id, 0u);
}

TEST(Channel, MarkovRowFollowsPreviousDocument) {
  const auto spec = ChannelSpec::markov1({0.5, 0.5}, {{0.2, 0.8}, {0.9, 0.1}});
  const auto f = frequencies(spec, History({Document(0), Document(1)}), 10000, 5);
  EXPECT_NEAR(f[0], 0.9, 0.02);
}

TEST(Channel, MarkovEmptyHistoryUsesInitialVector) {
  const auto spec = ChannelSpec::markov1({0.0, 1.0}, {{1.0, 0.0}, {1.0, 0.0}});
  Rng rng(1);
  EXPECT_EQ(sample(spec, History{}, rng).id, 1u);
  EXPECT_EQ(sample(spec, History({Document(1)}), rng).id, 0u);
}

TEST(Channel, ProbReadsTheConditionalRow) {
  const auto u8 = ChannelSpec::uniform(8);
  for (std::uint64_t d = 0; d < 8; ++d) EXPECT_DOUBLE_EQ(prob(u8, History{}, Document(d)), 0.125);

  const auto point = ChannelSpec::point_mass(2, 0);
  EXPECT_DOUBLE_EQ(prob(point, History{}, Document(0)), 1.0);
  EXPECT_DOUBLE_EQ(prob(point, History{}, Document(1)), 0.0);

  const auto m = ChannelSpec::markov1({1.0 / 3, 1.0 / 3, 1.0 / 3}, {{1, 0, 0}, {0, 1, 0}, {0.3, 0.7, 0}});
  EXPECT_DOUBLE_EQ(prob(m, History({Document(2)}), Document(1)), 0.7);

  EXPECT_THROW(prob(u8, History{}, Document(8)), ConfigError);
}

TEST(Channel, MinEntropy) {
  EXPECT_DOUBLE_EQ(min_entropy(ChannelSpec::uniform(1024), History{}), 10.0);
  EXPECT_DOUBLE_EQ(min_entropy(ChannelSpec::point_mass(4, 1), History{}), 0.0);
  EXPECT_DOUBLE_EQ(min_entropy(ChannelSpec::stationary({0.5, 0.25, 0.25}), History{}), 1.0);
  for (int m = 0; m <= 16; ++m) EXPECT_DOUBLE_EQ(min_entropy(ChannelSpec::uniform(std::size_t{1} << m), History{}), m);
}

TEST(Channel, LoadStationarySpec) {
  const auto spec = load_channel_spec(
      R"({"kind": "stationary", "alphabet_size": 4, "probs": ["0.25", "0.25", "0.25", "0.25"]})");
  EXPECT_EQ(spec.kind(), ChannelKind::stationary);
  EXPECT_EQ(spec.alphabet_size(), 4u);
  EXPECT_EQ(spec.probs(), (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
}

TEST(Channel, LoadMarkovSpec) {
  const auto spec = load_channel_spec(
      R"({"kind": "markov1", "alphabet_size": 2, "initial": ["0.5", "0.5"],
          "matrix": [["0.9", "0.1"], ["0.3", "0.7"]]})");
  EXPECT_EQ(spec.kind(), ChannelKind::markov1);
  EXPECT_EQ(spec.alphabet_size(), 2u);
  EXPECT_EQ(spec.matrix()[1], (std::vector<double>{0.3, 0.7}));

  const auto again = load_channel_spec(to_json(spec));
  EXPECT_EQ(again.matrix(), spec.matrix());
  EXPECT_EQ(again.initial(), spec.initial());
}

TEST(Channel, LoadRejectsBadSpecs) {
  EXPECT_THROW(load_channel_spec(R"({"kind": "stationary", "alphabet_size": 2, "probs": ["0.5", "0.4"]})"),
               ConfigError);
  EXPECT_THROW(load_channel_spec(R"({"kind": "stationary", "alphabet_size": 2, "probs": ["1.5", "-0.5"]})"),
               ConfigError);
  EXPECT_THROW(load_channel_spec(R"({"kind": "markov1", "alphabet_size": 2, "initial": ["0.5", "0.5"],
                                     "matrix": [["0.9", "0.1"], ["0.3", "0.6"]]})"),
               ConfigError);
  EXPECT_THROW(load_channel_spec(R"({"kind": "stationary", "alphabet_size": 3, "probs": ["0.5", "0.5"]})"),
               ConfigError);
  EXPECT_THROW(load_channel_spec(R"({"kind": "hmm", "alphabet_size": 1, "probs": ["1"]})"), ConfigError);
  EXPECT_THROW(load_channel_spec(R"({"kind": "stationary", "alphabet_size": 1, "probs": ["one"]})"), ConfigError);
  EXPECT_THROW(load_channel_spec("{not json"), ConfigError);
}

TEST(Channel, SumToleranceIsOneInABillion) {
  EXPECT_NO_THROW(ChannelSpec::stationary({0.5, 0.5 + 5e-10}));
  EXPECT_THROW(ChannelSpec::stationary({0.5, 0.5 + 5e-9}), ConfigError);
}

// Empirical frequencies over 1e5 draws agree with prob() within four
// standard deviations, for a handful of generated channels and histories.
TEST(ChannelProperty, SamplingMatchesProb) {
  Rng gen(2024);
  const std::size_t draws = 100000;
  for (int round = 0; round < 6; ++round) {
    const std::size_t n = 2 + gen.below(7);
    auto random_row = [&] {
      std::vector<double> row(n);
      double sum = 0.0;
      for (auto& p : row) {
        p = gen.below(4) == 0 ? 0.0 : gen.uniform01();
        sum += p;
      }
      if (sum == 0.0) {
        row[0] = 1.0;
        sum = 1.0;
      }
      for (auto& p : row) p /= sum;
      return row;
    };
    std::vector<std::vector<double>> matrix;
    for (std::size_t i = 0; i < n; ++i) matrix.push_back(random_row());
    const auto spec = round % 2 ? ChannelSpec::stationary(random_row()) : ChannelSpec::markov1(random_row(), matrix);
    const History h = round % 3 ? History({Document(gen.below(n))}) : History{};

    const auto f = frequencies(spec, h, draws, gen.next());
    for (std::size_t d = 0; d < n; ++d) {
      const double p = prob(spec, h, Document(d));
      EXPECT_NEAR(f[d], p, 4 * std::sqrt(p * (1 - p) / draws) + 1e-12) << "round " << round << " doc " << d;
    }
  }
}

TEST(ChannelProperty, SameSeedSameDraws) {
  const auto spec = two_state_markov();
  Rng a(77), b(77);
  History ha, hb;
  for (int i = 0; i < 1000; ++i) {
    ha.append(sample(spec, ha, a));
    hb.append(sample(spec, hb, b));
  }
  EXPECT_EQ(ha.docs(), hb.docs());
}

TEST(Channel, CanonicalBytesAreInjective) {
  std::set<Bytes> seen;
  for (std::uint64_t id = 0; id < 300; ++id) EXPECT_TRUE(seen.insert(Document(id).canonical_bytes()).second);
  EXPECT_TRUE(seen.insert(Document(1, {0x00}).canonical_bytes()).second);
  EXPECT_EQ(Document(0x0102).canonical_bytes(), (Bytes{0, 0, 0, 0, 0, 0, 1, 2}));
}

TEST(Channel, CoverSourceCountsDraws) {
  const auto spec = ChannelSpec::uniform(4);
  Rng rng(1);
  CoverSource cover(spec, rng);
  History h;
  for (int i = 0; i < 17; ++i) h.append(cover.draw(h));
  EXPECT_EQ(cover.draws(), 17u);
  EXPECT_EQ(h.size(), 17u);
}
