#pragma once

#include <cstdint>

namespace stegomail {

// Work and output accounting for one or more embed calls.
struct EmbedStats {
  std::uint64_t samples_drawn = 0;    // channel-oracle draws
  std::uint64_t prf_evaluations = 0;
  std::uint64_t bits_embedded = 0;    // hiddentext bits, before any coding
  std::uint64_t docs_emitted = 0;

  EmbedStats& operator+=(const EmbedStats& o) {
    samples_drawn += o.samples_drawn;
    prf_evaluations += o.prf_evaluations;
    bits_embedded += o.bits_embedded;
    docs_emitted += o.docs_emitted;
    return *this;
  }

  friend bool operator==(const EmbedStats&, const EmbedStats&) = default;
};

}  // namespace stegomail
