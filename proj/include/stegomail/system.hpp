#pragma once

// Uniform front end over the six stegosystems, used by the security games,
// the reliability and rate estimators, the benchmarks and the CLI.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "stegomail/channel.hpp"
#include "stegomail/ecc.hpp"
#include "stegomail/embed_stats.hpp"
#include "stegomail/error.hpp"
#include "stegomail/mail.hpp"
#include "stegomail/prf.hpp"
#include "stegomail/stego_email.hpp"
#include "stegomail/stego_prior.hpp"

namespace stegomail {

enum class SystemKind { s1, s2, s3, s4, p1, p2 };

inline constexpr SystemKind kAllSystems[] = {SystemKind::s1, SystemKind::s2, SystemKind::s3,
                                             SystemKind::s4, SystemKind::p1, SystemKind::p2};

inline std::string to_string(SystemKind k) {
  switch (k) {
    case SystemKind::s1: return "s1";
    case SystemKind::s2: return "s2";
    case SystemKind::s3: return "s3";
    case SystemKind::s4: return "s4";
    case SystemKind::p1: return "p1";
    case SystemKind::p2: return "p2";
  }
  return "?";
}

inline SystemKind parse_system(std::string_view s) {
  for (auto k : kAllSystems)
    if (to_string(k) == s) return k;
  throw ConfigError("unknown system '" + std::string(s) + "'");
}

inline bool is_email(SystemKind k) { return k == SystemKind::p1 || k == SystemKind::p2; }

inline Protocol protocol_of(SystemKind k) {
  if (!is_email(k)) throw ConfigError(to_string(k) + " is not an email protocol");
  return k == SystemKind::p1 ? Protocol::p1 : Protocol::p2;
}

struct SystemConfig {
  SystemKind kind = SystemKind::p1;
  std::size_t count = 0;       // S1/S3 iteration budget; 0 means the key length
  std::size_t copies = 3;      // t for S3 and S4
  unsigned repetition = RepetitionCode::kDefaultRepetition;  // r for S2
  PrfMode prf = PrfMode::keyed;
  std::size_t key_bits = Key::kDefaultBits;
};

// Number of documents/mails the system emits for `bits` hiddentext bits.
inline std::size_t output_length(const SystemConfig& cfg, std::size_t bits) {
  switch (cfg.kind) {
    case SystemKind::s1:
    case SystemKind::p1:
    case SystemKind::p2: return bits;
    case SystemKind::s2: return bits * cfg.repetition;
    case SystemKind::s3:
    case SystemKind::s4: return bits * cfg.copies;
  }
  return bits;
}

// What one embed call puts on the wire. `mails` is filled for the email
// protocols only; `docs` always holds the documents in sending order.
struct Transmission {
  std::vector<Document> docs;
  std::vector<Mail> mails;
};

// Sender and receiver sharing one function and one initial counter value.
// Each party advances its own counter.
class StegoSystem {
 public:
  StegoSystem(SystemConfig cfg, BitFunction fn, Counter start = Counter{}, Timestamp start_tick = 0)
      : cfg_(cfg), fn_(std::move(fn)), sender_(start), receiver_(start), tick_(start_tick) {
    if (cfg_.kind == SystemKind::s4 && (cfg_.copies == 0 || cfg_.copies % 2 == 0)) {
      throw ConfigError("S4 needs an odd number of copies");
    }
    if (cfg_.kind == SystemKind::s3 && cfg_.copies == 0) throw ConfigError("S3 needs t >= 1");
    if (cfg_.kind == SystemKind::s2) static_cast<void>(RepetitionCode(cfg_.repetition));
  }

  // Draws a key from `rng` (or a random-oracle seed) per cfg.prf.
  static StegoSystem fresh(const SystemConfig& cfg, Rng& rng) {
    const Key key = Key::random(rng, cfg.key_bits);
    if (cfg.prf == PrfMode::keyed) return StegoSystem(cfg, BitFunction::keyed(key));
    return StegoSystem(cfg, BitFunction::random_oracle(rng.next()));
  }

  const SystemConfig& config() const { return cfg_; }
  const BitFunction& function() const { return fn_; }
  const Counter& sender_counter() const { return sender_; }
  const Counter& receiver_counter() const { return receiver_; }
  Timestamp next_tick() const { return tick_; }

  std::size_t count() const { return cfg_.count ? cfg_.count : default_count(fn_); }

  Transmission embed(const BitString& m, History& h, CoverSource& cover, EmbedStats& stats) {
    Transmission out;
    switch (cfg_.kind) {
      case SystemKind::s1: out.docs = s1_embed(fn_, m, h, cover, count(), stats); break;
      case SystemKind::s2: out.docs = s2_embed(fn_, sender_, m, h, cover, cfg_.repetition, stats); break;
      case SystemKind::s3: out.docs = s3_embed(fn_, m, h, cover, count(), cfg_.copies, stats); break;
      case SystemKind::s4: out.docs = s4_embed_message(fn_, sender_, m, h, cover, cfg_.copies, stats); break;
      case SystemKind::p1:
      case SystemKind::p2: {
        StegoKeyState st{fn_, sender_};
        out.mails = stegomail::embed(protocol_of(cfg_.kind), st, m, h, tick_, cover, stats);
        sender_ = st.counter;
        tick_ += m.size();
        out.docs.reserve(out.mails.size());
        for (const auto& s : out.mails) out.docs.push_back(extract_document(s));
        break;
      }
    }
    return out;
  }

  // Extraction as the receiver sees it: email mails pass through the
  // simulated transport into the receiver's mailboxes first.
  BitString extract(const Transmission& tx) {
    switch (cfg_.kind) {
      case SystemKind::s1: return s1_extract(fn_, tx.docs);
      case SystemKind::s2: return s2_extract(fn_, receiver_, tx.docs, cfg_.repetition);
      case SystemKind::s3: return s3_extract(fn_, tx.docs, cfg_.copies);
      case SystemKind::s4: return s4_extract_message(fn_, receiver_, tx.docs, cfg_.copies);
      case SystemKind::p1: {
        StegoKeyState st{fn_, receiver_};
        auto m = p1_extract(st, deliver(tx.mails, address1()), deliver(tx.mails, address2()));
        receiver_ = st.counter;
        return m;
      }
      case SystemKind::p2: {
        StegoKeyState st{fn_, receiver_};
        auto m = p2_extract_multi(st, deliver(tx.mails, address1()));
        receiver_ = st.counter;
        return m;
      }
    }
    return {};
  }

 private:
  SystemConfig cfg_;
  BitFunction fn_;
  Counter sender_;
  Counter receiver_;
  Timestamp tick_;
};

}  // namespace stegomail
