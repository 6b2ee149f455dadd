#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "stegomail/channel.hpp"

namespace stegomail {

// Upper tail of the chi-square distribution.
inline double chi_square_p_value(double statistic, std::size_t df) {
  if (df == 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(df) / 2.0, statistic / 2.0);
}

struct GoodnessOfFit {
  double statistic = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;
  // A document with zero probability under its context was observed.
  bool impossible = false;
  std::uint64_t observations = 0;
};

// A run of consecutive documents that followed `history`.
struct DocumentRun {
  History history;
  std::vector<Document> docs;
};

// Pearson goodness of fit of observed documents against D_h, pooled per
// conditioning context. For a stationary channel this is the plain one-sample
// test; for markov1 it is the transition-count test (one row per previous
// document), with statistics and degrees of freedom summed over rows.
inline GoodnessOfFit conditional_goodness_of_fit(const ChannelSpec& spec, const std::vector<DocumentRun>& runs) {
  std::map<std::size_t, std::vector<std::uint64_t>> counts;
  GoodnessOfFit out;
  for (const auto& run : runs) {
    std::size_t ctx = spec.row_index(run.history);
    for (const auto& d : run.docs) {
      if (d.id >= spec.alphabet_size()) {
        out.impossible = true;
      } else {
        auto& c = counts[ctx];
        if (c.empty()) c.assign(spec.alphabet_size(), 0);
        ++c[d.id];
      }
      ++out.observations;
      ctx = spec.row_index_after(d);
    }
  }
  for (const auto& [ctx, c] : counts) {
    const auto& row = spec.row(ctx);
    std::uint64_t total = 0;
    for (auto x : c) total += x;
    std::size_t cells = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] == 0.0) {
        if (c[i] > 0) out.impossible = true;
        continue;
      }
      ++cells;
      const double expected = static_cast<double>(total) * row[i];
      const double diff = static_cast<double>(c[i]) - expected;
      out.statistic += diff * diff / expected;
    }
    if (cells > 0) out.df += cells - 1;
  }
  out.p_value = out.impossible ? 0.0 : chi_square_p_value(out.statistic, out.df);
  return out;
}

// Exact two-sided binomial test of H0: success probability = 1/2.
inline double binomial_test_half(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return 1.0;
  const boost::math::binomial_distribution<double> dist(static_cast<double>(trials), 0.5);
  const auto tail = std::min(successes, trials - successes);
  if (2 * tail == trials) return 1.0;
  return std::min(1.0, 2.0 * boost::math::cdf(dist, static_cast<double>(tail)));
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = std::min(xs.size(), ys.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace stegomail
