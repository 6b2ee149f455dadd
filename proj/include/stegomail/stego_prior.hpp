#pragma once

// Rejection-sampling stegosystems used as baselines:
//
//   S1  one document per bit, rejection sampling on F_K(c) with |K| tries
//   S2  repetition-coded bits, two tries per coded bit on F_K(N, c)
//   S3  t-document tuples, rejection sampling on F_K(x_1 ... x_t)
//   S4  t copies per bit, two draws per copy, majority extraction
//
// All of them emit bare documents. Embedding extends the caller's history.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stegomail/channel.hpp"
#include "stegomail/ecc.hpp"
#include "stegomail/embed_stats.hpp"
#include "stegomail/error.hpp"
#include "stegomail/prf.hpp"

namespace stegomail {

// Iteration budget |K| for S1/S3: the key length, or the default key length
// when the function is a random oracle.
inline std::size_t default_count(const BitFunction& fn) {
  return fn.key() ? fn.key()->bit_length() : Key::kDefaultBits;
}

namespace detail {

inline Document draw(CoverSource& cover, const History& h, EmbedStats& stats) {
  ++stats.samples_drawn;
  return cover.draw(h);
}

inline void require_count(std::size_t count) {
  if (count == 0) throw ConfigError("rejection sampling needs count >= 1");
}

}  // namespace detail

// ---- S1 -------------------------------------------------------------------

// Draw until F_K(c) = x or `count` draws were made; return the last draw.
inline Document s1_rs(const BitFunction& fn, Bit x, std::size_t count, const History& h, CoverSource& cover,
                      EmbedStats& stats) {
  detail::require_count(count);
  Document c;
  for (std::size_t i = 0; i < count; ++i) {
    c = detail::draw(cover, h, stats);
    ++stats.prf_evaluations;
    if (eval_bit(fn, c) == x) break;
  }
  return c;
}

inline std::vector<Document> s1_embed(const BitFunction& fn, const BitString& m, History& h, CoverSource& cover,
                                      std::size_t count, EmbedStats& stats) {
  std::vector<Document> out;
  out.reserve(m.size());
  for (auto bit : m) {
    out.push_back(s1_rs(fn, bit, count, h, cover, stats));
    h.append(out.back());
  }
  stats.bits_embedded += m.size();
  stats.docs_emitted += out.size();
  return out;
}

inline BitString s1_extract(const BitFunction& fn, std::span<const Document> docs) {
  BitString m;
  m.reserve(docs.size());
  for (const auto& c : docs) m.push_back(eval_bit(fn, c));
  return m;
}

// ---- S2 -------------------------------------------------------------------

// Rejection sampling keyed by the synchronized counter; the counter is not
// advanced here.
inline Document s2_rs(const BitFunction& fn, const Counter& n, Bit x, std::size_t count, const History& h,
                      CoverSource& cover, EmbedStats& stats) {
  detail::require_count(count);
  Document c;
  for (std::size_t i = 0; i < count; ++i) {
    c = detail::draw(cover, h, stats);
    ++stats.prf_evaluations;
    if (eval_bit_sync(fn, n, c) == x) break;
  }
  return c;
}

inline constexpr std::size_t kS2Tries = 2;

inline std::vector<Document> s2_embed(const BitFunction& fn, Counter& n, const BitString& hidden, History& h,
                                      CoverSource& cover, unsigned r, EmbedStats& stats) {
  const auto coded = RepetitionCode(r).encode(hidden);
  std::vector<Document> out;
  out.reserve(coded.size());
  for (auto bit : coded) {
    out.push_back(s2_rs(fn, n, bit, kS2Tries, h, cover, stats));
    h.append(out.back());
    n.increment();
  }
  stats.bits_embedded += hidden.size();
  stats.docs_emitted += out.size();
  return out;
}

// Raw per-document bits before decoding; advances n once per document.
inline BitString s2_extract_raw(const BitFunction& fn, Counter& n, std::span<const Document> docs) {
  BitString raw;
  raw.reserve(docs.size());
  for (const auto& c : docs) {
    raw.push_back(eval_bit_sync(fn, n, c));
    n.increment();
  }
  return raw;
}

inline BitString s2_extract(const BitFunction& fn, Counter& n, std::span<const Document> docs, unsigned r) {
  const RepetitionCode code(r);
  if (docs.size() % r != 0) throw FramingError("S2 stegotext length is not a multiple of the repetition factor");
  return code.decode(s2_extract_raw(fn, n, docs));
}

// ---- S3 -------------------------------------------------------------------

// Draw t-tuples until F_K(tuple) = y or `count` tuples were drawn. Each tuple
// is drawn against a scratch history that grows inside the tuple; the
// caller's history is untouched.
inline std::vector<Document> s3_rs(const BitFunction& fn, Bit y, std::size_t count, const History& h,
                                   CoverSource& cover, std::size_t t, EmbedStats& stats) {
  detail::require_count(count);
  if (t == 0) throw ConfigError("S3 needs t >= 1 covertexts per bit");
  std::vector<Document> x;
  for (std::size_t i = 0; i < count; ++i) {
    x.clear();
    History scratch = h;
    for (std::size_t j = 0; j < t; ++j) {
      x.push_back(detail::draw(cover, scratch, stats));
      scratch.append(x.back());
    }
    ++stats.prf_evaluations;
    if (eval_bit_tuple(fn, x) == y) break;
  }
  return x;
}

// Flattened output: t documents per hiddentext bit. Only the accepted tuple
// is committed to the history.
inline std::vector<Document> s3_embed(const BitFunction& fn, const BitString& m, History& h, CoverSource& cover,
                                      std::size_t count, std::size_t t, EmbedStats& stats) {
  std::vector<Document> out;
  out.reserve(m.size() * t);
  for (auto bit : m) {
    auto tuple = s3_rs(fn, bit, count, h, cover, t, stats);
    h.append(tuple);
    out.insert(out.end(), tuple.begin(), tuple.end());
  }
  stats.bits_embedded += m.size();
  stats.docs_emitted += out.size();
  return out;
}

inline BitString s3_extract(const BitFunction& fn, std::span<const Document> docs, std::size_t t) {
  if (t == 0) throw ConfigError("S3 needs t >= 1 covertexts per bit");
  if (docs.size() % t != 0) throw FramingError("S3 stegotext length is not a multiple of t");
  BitString m;
  m.reserve(docs.size() / t);
  for (std::size_t i = 0; i < docs.size(); i += t) m.push_back(eval_bit_tuple(fn, docs.subspan(i, t)));
  return m;
}

// ---- S4 -------------------------------------------------------------------

namespace detail {

inline void require_odd_copies(std::size_t t) {
  if (t == 0 || t % 2 == 0) throw ConfigError("S4 needs an odd number of copies");
}

}  // namespace detail

// One hiddentext bit as t documents. Copy i (0-based) is keyed by N + i; n
// ends advanced by t.
inline std::vector<Document> s4_embed(const BitFunction& fn, Counter& n, Bit m, History& h, CoverSource& cover,
                                      std::size_t t, EmbedStats& stats) {
  detail::require_odd_copies(t);
  std::vector<Document> out;
  out.reserve(t);
  for (std::size_t i = 0; i < t; ++i) {
    Document d = detail::draw(cover, h, stats);
    Document d2 = detail::draw(cover, h, stats);
    ++stats.prf_evaluations;
    out.push_back(eval_bit_sync(fn, n.plus(i), d) == m ? std::move(d) : std::move(d2));
    h.append(out.back());
  }
  n.advance(t);
  stats.bits_embedded += 1;
  stats.docs_emitted += t;
  return out;
}

inline Bit s4_extract(const BitFunction& fn, Counter& n, std::span<const Document> docs, std::size_t t) {
  detail::require_odd_copies(t);
  if (docs.size() != t) throw FramingError("S4 expects exactly t documents per bit");
  std::size_t ones = 0;
  for (const auto& s : docs) {
    ones += eval_bit_sync(fn, n, s);
    n.increment();
  }
  return ones > t / 2 ? 1 : 0;
}

// Multi-bit S4: bits one after another, t documents each.
inline std::vector<Document> s4_embed_message(const BitFunction& fn, Counter& n, const BitString& m, History& h,
                                              CoverSource& cover, std::size_t t, EmbedStats& stats) {
  std::vector<Document> out;
  out.reserve(m.size() * t);
  for (auto bit : m) {
    auto part = s4_embed(fn, n, bit, h, cover, t, stats);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

inline BitString s4_extract_message(const BitFunction& fn, Counter& n, std::span<const Document> docs, std::size_t t) {
  detail::require_odd_copies(t);
  if (docs.size() % t != 0) throw FramingError("S4 stegotext length is not a multiple of t");
  BitString m;
  m.reserve(docs.size() / t);
  for (std::size_t i = 0; i < docs.size(); i += t) m.push_back(s4_extract(fn, n, docs.subspan(i, t), t));
  return m;
}

}  // namespace stegomail
