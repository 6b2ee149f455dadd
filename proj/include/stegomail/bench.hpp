#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "stegomail/channel.hpp"
#include "stegomail/ecc.hpp"
#include "stegomail/embed_stats.hpp"
#include "stegomail/rng.hpp"
#include "stegomail/stats.hpp"
#include "stegomail/system.hpp"

namespace stegomail {

struct BenchRow {
  SystemKind system;
  std::size_t n = 0;             // hiddentext bits per message
  double embed_seconds = 0.0;    // per message, best batch
  double extract_seconds = 0.0;  // per message, best batch
  EmbedStats stats;              // one message
};

struct BenchOptions {
  std::vector<std::size_t> lengths;   // message lengths in bits
  std::size_t batch_bits = 1 << 15;   // hiddentext bits processed per timed batch
  std::size_t batches = 5;
  std::uint64_t seed = 1;
};

// Times embed and extract for each message length. Every batch processes
// about the same number of bits so short messages are not dominated by
// timer resolution; the fastest of `batches` batches is kept.
inline std::vector<BenchRow> bench(const std::vector<SystemConfig>& systems, const ChannelSpec& spec,
                                   const BenchOptions& opt) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (const auto& cfg : systems) {
    for (const auto n : opt.lengths) {
      BenchRow row{cfg.kind, n};
      const std::size_t reps = std::max<std::size_t>(1, opt.batch_bits / std::max<std::size_t>(n, 1));
      row.embed_seconds = std::numeric_limits<double>::infinity();
      row.extract_seconds = std::numeric_limits<double>::infinity();
      for (std::size_t b = 0; b < opt.batches; ++b) {
        Rng rng = Rng::derive(opt.seed, b);
        StegoSystem system = StegoSystem::fresh(cfg, rng);
        CoverSource cover(spec, rng);
        std::vector<BitString> messages(reps, BitString(n));
        for (auto& m : messages)
          for (auto& bit : m) bit = rng.bit() ? 1 : 0;
        std::vector<Transmission> sent;
        sent.reserve(reps);

        EmbedStats stats;
        auto t0 = clock::now();
        for (const auto& m : messages) {
          History h;
          sent.push_back(system.embed(m, h, cover, stats));
        }
        auto t1 = clock::now();
        std::size_t sink = 0;
        for (const auto& tx : sent) sink += system.extract(tx).size();
        auto t2 = clock::now();
        if (sink != reps * n) throw Error("benchmark extraction returned the wrong length");

        row.embed_seconds = std::min(row.embed_seconds, std::chrono::duration<double>(t1 - t0).count() / reps);
        row.extract_seconds = std::min(row.extract_seconds, std::chrono::duration<double>(t2 - t1).count() / reps);
        if (b == 0) {
          row.stats = stats;
          row.stats.samples_drawn /= reps;
          row.stats.prf_evaluations /= reps;
          row.stats.bits_embedded /= reps;
          row.stats.docs_emitted /= reps;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// log-log slope of embed (or extract) time against n for one system.
inline double time_slope(const std::vector<BenchRow>& rows, SystemKind system, bool extract = false) {
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    if (r.system != system) continue;
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(extract ? r.extract_seconds : r.embed_seconds);
  }
  return loglog_slope(xs, ys);
}

}  // namespace stegomail
