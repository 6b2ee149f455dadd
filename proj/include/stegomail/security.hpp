#pragma once

// Passive distinguishing game between a stegotext oracle (ST) and a
// covertext oracle (CT), empirical advantage estimation, concrete
// distinguishers, and the rate / capacity / reliability calculators.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stegomail/channel.hpp"
#include "stegomail/ecc.hpp"
#include "stegomail/embed_stats.hpp"
#include "stegomail/error.hpp"
#include "stegomail/mail.hpp"
#include "stegomail/prf.hpp"
#include "stegomail/rng.hpp"
#include "stegomail/stats.hpp"
#include "stegomail/stego_email.hpp"
#include "stegomail/system.hpp"

namespace stegomail {

enum class OracleKind { st, ct };

// ---- oracles ----------------------------------------------------------------

// ST: the system's own embed output.
inline Transmission st_oracle(StegoSystem& system, const BitString& m, History& h, CoverSource& cover,
                              EmbedStats& stats) {
  return system.embed(m, h, cover, stats);
}

// CT: as many normal mails (or bare documents, for the prior systems) as the
// system would send for m. Documents follow the channel with a growing
// history; recipient arrays are uniform over the protocol's set; ticks
// continue from `tick` exactly as an embedder's would.
inline Transmission ct_oracle(const SystemConfig& cfg, const BitString& m, History& h, CoverSource& cover, Rng& rng,
                              Timestamp& tick) {
  Transmission out;
  const std::size_t n = output_length(cfg, m.size());
  out.docs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.docs.push_back(cover.draw(h));
    h.append(out.docs.back());
  }
  if (is_email(cfg.kind)) {
    const auto set = ProtocolAddressSet::of(protocol_of(cfg.kind));
    out.mails.reserve(n);
    for (const auto& d : out.docs) out.mails.emplace_back(d, set.arrays[rng.bit() ? 1 : 0], tick++);
  }
  return out;
}

// ---- game -------------------------------------------------------------------

struct Query {
  BitString hiddentext;
  History history;
};

struct GameTranscript {
  std::vector<Query> queries;
  std::vector<Transmission> responses;
  Bit guess = 0;

  std::size_t hiddentext_bits() const {
    std::size_t n = 0;
    for (const auto& q : queries) n += q.hiddentext.size();
    return n;
  }
};

// Everything the adversary knows besides the transcript: the system under
// attack and the channel.
struct GameSetup {
  SystemConfig system;
  ChannelSpec channel;
  std::size_t queries = 1;
  std::size_t bits_per_query = 100;
};

enum class HiddentextChoice { random, zeros };

// A passive adversary: picks hiddentexts, then outputs 1 for "ST" or 0 for "CT".
struct Distinguisher {
  std::string name;
  HiddentextChoice choice = HiddentextChoice::random;
  std::function<Bit(const GameTranscript&, const GameSetup&)> guess;
};

inline Distinguisher constant_distinguisher() {
  return {"constant", HiddentextChoice::random, [](const GameTranscript&, const GameSetup&) -> Bit { return 0; }};
}

// Guesses ST when the share of the first protocol array across all responses
// is incompatible with 1/2 (two-sided exact binomial test). Transcripts
// without mails never look like ST.
inline Bit address_frequency_guess(const GameTranscript& tr, SystemKind kind, double alpha = 0.05) {
  if (!is_email(kind)) return 0;
  const auto set = ProtocolAddressSet::of(protocol_of(kind));
  std::uint64_t first = 0;
  std::uint64_t total = 0;
  for (const auto& r : tr.responses) {
    for (const auto& s : r.mails) {
      first += s.addresses() == set.arrays[0] ? 1 : 0;
      ++total;
    }
  }
  if (total == 0) return 0;
  return binomial_test_half(first, total) < alpha ? 1 : 0;
}

inline Distinguisher address_frequency_distinguisher(double alpha = 0.05) {
  return {"address", HiddentextChoice::random, [alpha](const GameTranscript& tr, const GameSetup& setup) {
            return address_frequency_guess(tr, setup.system.kind, alpha);
          }};
}

// Guesses ST when the documents fail a goodness-of-fit test against the
// known channel. Uses a constant all-zero hiddentext.
inline Bit document_frequency_guess(const GameTranscript& tr, const ChannelSpec& spec, double alpha = 0.05) {
  std::vector<DocumentRun> runs;
  runs.reserve(tr.responses.size());
  for (std::size_t i = 0; i < tr.responses.size(); ++i) runs.push_back({tr.queries[i].history, tr.responses[i].docs});
  return conditional_goodness_of_fit(spec, runs).p_value < alpha ? 1 : 0;
}

inline Distinguisher document_frequency_distinguisher(double alpha = 0.05) {
  return {"document", HiddentextChoice::zeros, [alpha](const GameTranscript& tr, const GameSetup& setup) {
            return document_frequency_guess(tr, setup.channel, alpha);
          }};
}

inline Distinguisher distinguisher_by_name(const std::string& name) {
  if (name == "constant") return constant_distinguisher();
  if (name == "address") return address_frequency_distinguisher();
  if (name == "document") return document_frequency_distinguisher();
  throw ConfigError("unknown distinguisher '" + name + "'");
}

struct AdvantageEstimate {
  double value = 0.0;
  std::size_t trials = 0;
  double confidence_halfwidth = 0.0;  // 95%, normal approximation
  double p_first = 0.0;               // acceptance rate against ST (or F_K)
  double p_second = 0.0;              // acceptance rate against CT (or f)
};

inline AdvantageEstimate make_estimate(std::size_t hits_first, std::size_t hits_second, std::size_t trials) {
  AdvantageEstimate est;
  est.trials = trials;
  const double n = static_cast<double>(trials);
  est.p_first = static_cast<double>(hits_first) / n;
  est.p_second = static_cast<double>(hits_second) / n;
  est.value = std::abs(est.p_first - est.p_second);
  est.confidence_halfwidth =
      1.96 * std::sqrt(est.p_first * (1 - est.p_first) / n + est.p_second * (1 - est.p_second) / n);
  return est;
}

inline constexpr std::size_t kMinGameTrials = 100;

namespace detail {

inline BitString choose_hiddentext(HiddentextChoice c, std::size_t bits, Rng& rng) {
  BitString m(bits, 0);
  if (c == HiddentextChoice::random)
    for (auto& b : m) b = rng.bit() ? 1 : 0;
  return m;
}

// One game instance. `override_prf` replaces the system's PRF mode, which is
// how the PRF-side game runs the same adversary against F_K and f.
inline GameTranscript play(const Distinguisher& g, const GameSetup& setup, OracleKind oracle, PrfMode prf,
                           std::uint64_t seed) {
  Rng rng(seed);
  SystemConfig cfg = setup.system;
  cfg.prf = prf;
  // Both oracles hold a uniformly chosen key; CT never uses its own.
  StegoSystem system = StegoSystem::fresh(cfg, rng);
  CoverSource cover(setup.channel, rng);
  Timestamp ct_tick = 0;
  EmbedStats stats;

  GameTranscript tr;
  History h;
  for (std::size_t q = 0; q < setup.queries; ++q) {
    Query query{choose_hiddentext(g.choice, setup.bits_per_query, rng), h};
    tr.responses.push_back(oracle == OracleKind::st ? st_oracle(system, query.hiddentext, h, cover, stats)
                                                    : ct_oracle(cfg, query.hiddentext, h, cover, rng, ct_tick));
    tr.queries.push_back(std::move(query));
  }
  tr.guess = g.guess(tr, setup);
  return tr;
}

}  // namespace detail

// Advantage |Pr[G^ST = 1] - Pr[G^CT = 1]| over `trials` games per side.
// Game i draws its ST side from Rng::derive(seed, 2i) and its CT side from
// Rng::derive(seed, 2i + 1).
inline AdvantageEstimate run_game(const Distinguisher& g, const GameSetup& setup, std::size_t trials,
                                  std::uint64_t seed) {
  if (trials < kMinGameTrials) throw ConfigError("a distinguishing game needs at least 100 trials");
  std::size_t st_hits = 0;
  std::size_t ct_hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    st_hits += detail::play(g, setup, OracleKind::st, setup.system.prf, Rng::derive(seed, 2 * i).next()).guess;
    ct_hits += detail::play(g, setup, OracleKind::ct, setup.system.prf, Rng::derive(seed, 2 * i + 1).next()).guess;
  }
  return make_estimate(st_hits, ct_hits, trials);
}

// PRF adversary built from G: it answers G's queries by running the embedder
// with its own oracle Fn and outputs G's guess. Returns
// |Pr[A^{F_K} = 1] - Pr[A^{f} = 1]|. The F_K side replays exactly the ST
// games of run_game with the same seed.
inline AdvantageEstimate run_prf_game(const Distinguisher& g, const GameSetup& setup, std::size_t trials,
                                      std::uint64_t seed) {
  if (trials < kMinGameTrials) throw ConfigError("a distinguishing game needs at least 100 trials");
  std::size_t keyed_hits = 0;
  std::size_t random_hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    keyed_hits += detail::play(g, setup, OracleKind::st, PrfMode::keyed, Rng::derive(seed, 2 * i).next()).guess;
    random_hits +=
        detail::play(g, setup, OracleKind::st, PrfMode::random_oracle, Rng::derive(seed, 2 * i + 1).next()).guess;
  }
  return make_estimate(keyed_hits, random_hits, trials);
}

// ---- rates ------------------------------------------------------------------

// Hiddentext bits per document sent.
inline double transmission_rate(const EmbedStats& stats) {
  if (stats.docs_emitted == 0) throw ConfigError("transmission rate undefined: no documents were sent");
  return static_cast<double>(stats.bits_embedded) / static_cast<double>(stats.docs_emitted);
}

// Embeds one random message of `bits` bits and reports the work done.
inline EmbedStats measure_embedding(const SystemConfig& cfg, const ChannelSpec& spec, std::size_t bits,
                                    std::uint64_t seed) {
  Rng rng(seed);
  StegoSystem system = StegoSystem::fresh(cfg, rng);
  CoverSource cover(spec, rng);
  History h;
  EmbedStats stats;
  system.embed(detail::choose_hiddentext(HiddentextChoice::random, bits, rng), h, cover, stats);
  return stats;
}

inline double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// Shannon capacity 1 - H(p) of a binary symmetric channel with crossover p.
inline double capacity(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("crossover probability must lie in [0, 1]");
  return 1.0 - binary_entropy(p);
}

// ---- reliability ------------------------------------------------------------

struct ReliabilityReport {
  std::size_t trials = 0;
  std::size_t bits = 0;
  std::size_t failed_messages = 0;
  std::size_t bit_errors = 0;
  EmbedStats stats;

  double message_failure_rate() const { return trials ? static_cast<double>(failed_messages) / static_cast<double>(trials) : 0.0; }
  double bit_error_rate() const {
    return trials * bits ? static_cast<double>(bit_errors) / static_cast<double>(trials * bits) : 0.0;
  }
};

// Embed -> extract round trips on random messages, each trial with a fresh
// history seeded by Rng::derive(seed, trial). Keys are fresh per trial unless
// a fixed key is given (keyed mode only).
inline ReliabilityReport reliability_estimate(const SystemConfig& cfg, const ChannelSpec& spec, std::size_t bits,
                                              std::size_t trials, std::uint64_t seed,
                                              const std::optional<Key>& key = std::nullopt) {
  if (key && cfg.prf != PrfMode::keyed) throw ConfigError("a fixed key needs the keyed PRF");
  ReliabilityReport rep;
  rep.trials = trials;
  rep.bits = bits;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng = Rng::derive(seed, i);
    StegoSystem system = key ? StegoSystem(cfg, BitFunction::keyed(*key)) : StegoSystem::fresh(cfg, rng);
    CoverSource cover(spec, rng);
    History h;
    const BitString m = detail::choose_hiddentext(HiddentextChoice::random, bits, rng);
    const auto tx = system.embed(m, h, cover, rep.stats);
    const BitString got = system.extract(tx);
    std::size_t errors = 0;
    for (std::size_t j = 0; j < m.size(); ++j) errors += (j >= got.size() || got[j] != m[j]) ? 1 : 0;
    rep.bit_errors += errors;
    rep.failed_messages += errors ? 1 : 0;
  }
  return rep;
}

}  // namespace stegomail
