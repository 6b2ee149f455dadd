#pragma once

// Address-choice steganography over email.
//
// Protocol 1: the receiver owns address1 and address2. A document d is drawn
// from the channel once per hiddentext bit m; the mail goes to <address1> when
// F_K(N, d) = m and to <address2> otherwise. The receiver recomputes F_K(N, d)
// and complements it for mails that arrived at address2.
//
// Protocol 2: every mail is broadcast to both addresses and the order of the
// recipient array carries the bit: <address1,address2> when F_K(N, d) = m,
// <address2,address1> otherwise. Either mailbox alone is enough to extract.
//
// Documents are never rejected, so each bit costs one channel draw and one
// PRF evaluation, and the emitted documents follow the channel exactly.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stegomail/channel.hpp"
#include "stegomail/ecc.hpp"
#include "stegomail/embed_stats.hpp"
#include "stegomail/error.hpp"
#include "stegomail/mail.hpp"
#include "stegomail/prf.hpp"

namespace stegomail {

enum class Protocol { p1, p2 };

inline const Address& address1() {
  static const Address a("address1");
  return a;
}

inline const Address& address2() {
  static const Address a("address2");
  return a;
}

// The two recipient arrays a protocol may use. `arrays[0]` means "take the
// PRF bit as is", `arrays[1]` means "complement it".
struct ProtocolAddressSet {
  Protocol variant;
  std::array<AddressArray, 2> arrays;

  static ProtocolAddressSet of(Protocol p) {
    if (p == Protocol::p1) return {p, {AddressArray{address1()}, AddressArray{address2()}}};
    return {p, {AddressArray{address1(), address2()}, AddressArray{address2(), address1()}}};
  }

  // 0 or 1 for a member array; throws for anything else.
  Bit index_of(const AddressArray& adr) const {
    if (adr == arrays[0]) return 0;
    if (adr == arrays[1]) return 1;
    std::string got;
    for (const auto& a : adr) got += (got.empty() ? "" : ",") + a.name();
    throw ProtocolError("address array <" + got + "> is not used by this protocol");
  }
};

// Key (or random function) plus the synchronized counter. One per party.
struct StegoKeyState {
  BitFunction fn;
  Counter counter;
};

inline Mail embed_one_bit(Protocol p, StegoKeyState& state, Bit m, History& h, Timestamp tick, CoverSource& cover,
                          EmbedStats& stats) {
  static const auto p1 = ProtocolAddressSet::of(Protocol::p1);
  static const auto p2 = ProtocolAddressSet::of(Protocol::p2);
  const auto& set = p == Protocol::p1 ? p1 : p2;

  Document d = cover.draw(h);
  ++stats.samples_drawn;
  ++stats.prf_evaluations;
  const Bit f = eval_bit_sync(state.fn, state.counter, d);
  state.counter.increment();
  h.append(d);
  ++stats.bits_embedded;
  ++stats.docs_emitted;
  return Mail(std::move(d), set.arrays[f == m ? 0 : 1], tick);
}

inline Bit extract_one_bit(Protocol p, StegoKeyState& state, const Mail& s) {
  static const auto p1 = ProtocolAddressSet::of(Protocol::p1);
  static const auto p2 = ProtocolAddressSet::of(Protocol::p2);
  const auto& set = p == Protocol::p1 ? p1 : p2;

  const Bit complement = set.index_of(extract_addresses(s));
  const Bit m = eval_bit_sync(state.fn, state.counter, extract_document(s)) ^ complement;
  state.counter.increment();
  return m;
}

// One mail per bit with ticks start_tick, start_tick + 1, ...
inline std::vector<Mail> embed(Protocol p, StegoKeyState& state, const BitString& m, History& h, Timestamp start_tick,
                               CoverSource& cover, EmbedStats& stats) {
  std::vector<Mail> out;
  out.reserve(m.size());
  Timestamp t = start_tick;
  for (auto bit : m) out.push_back(embed_one_bit(p, state, bit, h, t++, cover, stats));
  return out;
}

inline BitString extract_sequence(Protocol p, StegoKeyState& state, const std::vector<Mail>& mails) {
  BitString m;
  m.reserve(mails.size());
  for (const auto& s : mails) m.push_back(extract_one_bit(p, state, s));
  return m;
}

// ---- Protocol 1 -------------------------------------------------------------

inline Mail p1_embed_one_bit(StegoKeyState& state, Bit m, History& h, Timestamp tick, CoverSource& cover,
                             EmbedStats& stats) {
  return embed_one_bit(Protocol::p1, state, m, h, tick, cover, stats);
}

inline Bit p1_extract_one_bit(StegoKeyState& state, const Mail& s) { return extract_one_bit(Protocol::p1, state, s); }

inline std::vector<Mail> p1_embed(StegoKeyState& state, const BitString& m, History& h, Timestamp start_tick,
                                  CoverSource& cover, EmbedStats& stats) {
  return embed(Protocol::p1, state, m, h, start_tick, cover, stats);
}

// Bits are read back in sending order across both boxes.
inline BitString p1_extract(StegoKeyState& state, const Mailbox& box1, const Mailbox& box2) {
  return extract_sequence(Protocol::p1, state, merge_by_date(box1.mails, box2.mails));
}

// ---- Protocol 2 -------------------------------------------------------------

inline Mail p2_embed_one_bit(StegoKeyState& state, Bit m, History& h, Timestamp tick, CoverSource& cover,
                             EmbedStats& stats) {
  return embed_one_bit(Protocol::p2, state, m, h, tick, cover, stats);
}

inline Bit p2_extract_one_bit(StegoKeyState& state, const Mail& s) { return extract_one_bit(Protocol::p2, state, s); }

inline std::vector<Mail> p2_embed_multi(StegoKeyState& state, const BitString& m, History& h, Timestamp start_tick,
                                        CoverSource& cover, EmbedStats& stats) {
  return embed(Protocol::p2, state, m, h, start_tick, cover, stats);
}

inline BitString p2_extract_multi(StegoKeyState& state, const Mailbox& box) {
  if (!sorted_by_date(box.mails)) throw OrderingError("mailbox is not in sending order");
  return extract_sequence(Protocol::p2, state, box.mails);
}

}  // namespace stegomail
