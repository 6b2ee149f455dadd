#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "stegomail/error.hpp"
#include "stegomail/rng.hpp"

namespace stegomail {

using Bytes = std::vector<std::uint8_t>;

// A cover object. `id` indexes the channel alphabet; `payload` is optional
// opaque content carried along with the id.
struct Document {
  std::uint64_t id = 0;
  Bytes payload;

  Document() = default;
  explicit Document(std::uint64_t doc_id, Bytes bytes = {}) : id(doc_id), payload(std::move(bytes)) {}

  // 8-byte big-endian id followed by the payload. Injective over documents.
  Bytes canonical_bytes() const {
    Bytes out;
    out.reserve(8 + payload.size());
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(id >> shift));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
  }

  friend bool operator==(const Document&, const Document&) = default;
};

// Documents already sent. Only ever grows.
class History {
 public:
  History() = default;
  explicit History(std::vector<Document> docs) : docs_(std::move(docs)) {}

  void append(Document d) { docs_.push_back(std::move(d)); }
  void append(const std::vector<Document>& ds) { docs_.insert(docs_.end(), ds.begin(), ds.end()); }

  bool empty() const { return docs_.empty(); }
  std::size_t size() const { return docs_.size(); }
  const Document& back() const { return docs_.back(); }
  const std::vector<Document>& docs() const { return docs_; }

 private:
  std::vector<Document> docs_;
};

enum class ChannelKind { stationary, markov1 };

inline constexpr double kStochasticTolerance = 1e-9;

// History-conditioned distribution over documents {0, ..., alphabet_size-1}.
//
// stationary: one probability vector, independent of the history.
// markov1:    row `prev` of a row-stochastic matrix gives the distribution of
//             the next document after `prev`; `initial` is used for an empty
//             history.
//
// Immutable once constructed; construction validates every row.
class ChannelSpec {
 public:
  static ChannelSpec stationary(std::vector<double> probs) {
    ChannelSpec spec;
    spec.kind_ = ChannelKind::stationary;
    spec.alphabet_size_ = probs.size();
    spec.rows_.push_back(std::move(probs));
    spec.finish();
    return spec;
  }

  static ChannelSpec markov1(std::vector<double> initial, std::vector<std::vector<double>> matrix) {
    ChannelSpec spec;
    spec.kind_ = ChannelKind::markov1;
    spec.alphabet_size_ = initial.size();
    if (matrix.size() != initial.size()) {
      throw ConfigError("markov1 matrix has " + std::to_string(matrix.size()) + " rows, expected " +
                        std::to_string(initial.size()));
    }
    spec.rows_.push_back(std::move(initial));
    for (auto& row : matrix) spec.rows_.push_back(std::move(row));
    spec.finish();
    return spec;
  }

  static ChannelSpec uniform(std::size_t n) { return stationary(std::vector<double>(n, 1.0 / static_cast<double>(n))); }

  // All mass on `doc` out of an alphabet of `n`.
  static ChannelSpec point_mass(std::size_t n, std::uint64_t doc) {
    std::vector<double> probs(n, 0.0);
    if (doc >= n) throw ConfigError("point mass outside alphabet");
    probs[doc] = 1.0;
    return stationary(std::move(probs));
  }

  ChannelKind kind() const { return kind_; }
  std::size_t alphabet_size() const { return alphabet_size_; }

  // Distribution D_h as a probability vector.
  const std::vector<double>& row_for(const History& h) const { return rows_[row_index(h)]; }

  // Index of the conditioning context used for h: 0 for stationary channels
  // and for the markov1 initial vector, 1 + previous id otherwise.
  std::size_t row_index(const History& h) const {
    if (kind_ == ChannelKind::stationary || h.empty()) return 0;
    return 1 + static_cast<std::size_t>(h.back().id);
  }

  std::size_t row_index_after(const Document& prev) const {
    return kind_ == ChannelKind::stationary ? 0 : 1 + static_cast<std::size_t>(prev.id);
  }

  const std::vector<double>& row(std::size_t index) const { return rows_[index]; }
  const std::vector<double>& cdf(std::size_t index) const { return cdfs_[index]; }
  std::size_t row_count() const { return rows_.size(); }

  const std::vector<double>& probs() const { return rows_[0]; }
  const std::vector<double>& initial() const { return rows_[0]; }
  std::vector<std::vector<double>> matrix() const { return {rows_.begin() + 1, rows_.end()}; }

 private:
  ChannelSpec() = default;

  void finish() {
    if (alphabet_size_ == 0) throw ConfigError("alphabet_size must be positive");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto& row = rows_[r];
      if (row.size() != alphabet_size_) {
        throw ConfigError("row " + std::to_string(r) + " has " + std::to_string(row.size()) + " entries, expected " +
                          std::to_string(alphabet_size_));
      }
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("negative or non-finite probability in row " + std::to_string(r));
        sum += p;
      }
      if (std::abs(sum - 1.0) > kStochasticTolerance) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "row " << r << " sums to " << sum << ", not 1";
        throw ConfigError(msg.str());
      }
      std::vector<double> cdf(row.size());
      std::partial_sum(row.begin(), row.end(), cdf.begin());
      cdfs_.push_back(std::move(cdf));
    }
  }

  ChannelKind kind_ = ChannelKind::stationary;
  std::size_t alphabet_size_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<std::vector<double>> cdfs_;
};

// Draw one document from D_h by inverse CDF.
inline Document sample(const ChannelSpec& spec, const History& h, Rng& rng) {
  const std::size_t r = spec.row_index(h);
  const auto& cdf = spec.cdf(r);
  const double u = rng.uniform01();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) {
    // u landed in the rounding slack above the last partial sum: take the
    // last document with positive mass.
    const auto& row = spec.row(r);
    std::size_t last = row.size() - 1;
    while (last > 0 && row[last] == 0.0) --last;
    return Document(last);
  }
  return Document(static_cast<std::uint64_t>(std::distance(cdf.begin(), it)));
}

inline double prob(const ChannelSpec& spec, const History& h, const Document& d) {
  if (d.id >= spec.alphabet_size()) throw ConfigError("document id outside the channel alphabet");
  return spec.row_for(h)[d.id];
}

// -log2 of the most likely next document.
inline double min_entropy(const ChannelSpec& spec, const History& h) {
  const auto& row = spec.row_for(h);
  return std::log2(1.0 / *std::max_element(row.begin(), row.end()));
}

namespace detail {

inline double parse_probability(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("bad probability \"" + s + "\"");
    }
    if (used != s.size()) throw ConfigError("bad probability \"" + s + "\"");
    return p;
  }
  throw ConfigError("probability must be a decimal string or number");
}

inline std::vector<double> parse_vector(const nlohmann::json& v, const char* field) {
  if (!v.is_array()) throw ConfigError(std::string("field '") + field + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(parse_probability(p));
  return out;
}

}  // namespace detail

// Parse a channel spec document:
//
//   {"kind": "stationary", "alphabet_size": 4, "probs": ["0.25", "0.25", "0.25", "0.25"]}
//   {"kind": "markov1", "alphabet_size": 2, "initial": ["0.5", "0.5"],
//    "matrix": [["0.9", "0.1"], ["0.3", "0.7"]]}
//
// Probabilities may be decimal strings or JSON numbers.
inline ChannelSpec load_channel_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("channel spec parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("channel spec must be an object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) throw ConfigError("channel spec needs a string 'kind'");
  if (!doc.contains("alphabet_size") || !doc["alphabet_size"].is_number_unsigned()) {
    throw ConfigError("channel spec needs a positive integer 'alphabet_size'");
  }
  const auto kind = doc["kind"].get<std::string>();
  const auto n = doc["alphabet_size"].get<std::size_t>();

  ChannelSpec spec = [&] {
    if (kind == "stationary") {
      if (!doc.contains("probs")) throw ConfigError("stationary channel needs 'probs'");
      return ChannelSpec::stationary(detail::parse_vector(doc["probs"], "probs"));
    }
    if (kind == "markov1") {
      if (!doc.contains("initial") || !doc.contains("matrix")) throw ConfigError("markov1 channel needs 'initial' and 'matrix'");
      if (!doc["matrix"].is_array()) throw ConfigError("field 'matrix' must be an array of rows");
      std::vector<std::vector<double>> rows;
      for (const auto& r : doc["matrix"]) rows.push_back(detail::parse_vector(r, "matrix"));
      return ChannelSpec::markov1(detail::parse_vector(doc["initial"], "initial"), std::move(rows));
    }
    throw ConfigError("unknown channel kind '" + kind + "'");
  }();
  if (spec.alphabet_size() != n) {
    throw ConfigError("alphabet_size " + std::to_string(n) + " does not match " +
                      std::to_string(spec.alphabet_size()) + " probabilities");
  }
  return spec;
}

inline ChannelSpec load_channel_spec(std::istream& in) {
  std::string text(std::istreambuf_iterator<char>(in), {});
  return load_channel_spec(text);
}

inline std::string to_json(const ChannelSpec& spec) {
  auto fmt = [](const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double p : v) {
      std::ostringstream s;
      s.precision(17);
      s << p;
      arr.push_back(s.str());
    }
    return arr;
  };
  nlohmann::json doc;
  doc["alphabet_size"] = spec.alphabet_size();
  if (spec.kind() == ChannelKind::stationary) {
    doc["kind"] = "stationary";
    doc["probs"] = fmt(spec.probs());
  } else {
    doc["kind"] = "markov1";
    doc["initial"] = fmt(spec.initial());
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : spec.matrix()) rows.push_back(fmt(r));
    doc["matrix"] = rows;
  }
  return doc.dump();
}

// Sampling oracle S(h) that counts how often it is queried.
class CoverSource {
 public:
  CoverSource(const ChannelSpec& spec, Rng& rng) : spec_(&spec), rng_(&rng) {}

  Document draw(const History& h) {
    ++draws_;
    return sample(*spec_, h, *rng_);
  }

  const ChannelSpec& spec() const { return *spec_; }
  Rng& rng() { return *rng_; }
  std::uint64_t draws() const { return draws_; }

 private:
  const ChannelSpec* spec_;
  Rng* rng_;
  std::uint64_t draws_ = 0;
};

}  // namespace stegomail
