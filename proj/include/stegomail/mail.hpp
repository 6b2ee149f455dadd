#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stegomail/channel.hpp"
#include "stegomail/error.hpp"

namespace stegomail {

using Timestamp = std::uint64_t;

class Address {
 public:
  explicit Address(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw std::invalid_argument("address must be nonempty");
    if (name_.find_first_of(",\t\r\n") != std::string::npos) {
      throw std::invalid_argument("address '" + name_ + "' contains a reserved character");
    }
  }

  const std::string& name() const { return name_; }

  friend bool operator==(const Address&, const Address&) = default;

 private:
  std::string name_;
};

// Ordered recipient list. Equality is positional: <a,b> != <b,a>.
class AddressArray {
 public:
  AddressArray() = default;
  AddressArray(std::initializer_list<Address> addrs) : addrs_(addrs) {}
  explicit AddressArray(std::vector<Address> addrs) : addrs_(std::move(addrs)) {}

  bool empty() const { return addrs_.empty(); }
  std::size_t size() const { return addrs_.size(); }
  const Address& operator[](std::size_t i) const { return addrs_[i]; }
  auto begin() const { return addrs_.begin(); }
  auto end() const { return addrs_.end(); }

  bool contains(const Address& a) const { return std::find(addrs_.begin(), addrs_.end(), a) != addrs_.end(); }

  friend bool operator==(const AddressArray&, const AddressArray&) = default;

 private:
  std::vector<Address> addrs_;
};

// The triple (d, adr, t).
class Mail {
 public:
  Mail(Document doc, AddressArray addresses, Timestamp sent_at)
      : doc_(std::move(doc)), addresses_(std::move(addresses)), sent_at_(sent_at) {
    if (addresses_.empty()) throw std::invalid_argument("mail needs at least one recipient");
  }

  const Document& doc() const { return doc_; }
  const AddressArray& addresses() const { return addresses_; }
  Timestamp sent_at() const { return sent_at_; }

  friend bool operator==(const Mail&, const Mail&) = default;

 private:
  Document doc_;
  AddressArray addresses_;
  Timestamp sent_at_;
};

inline Document extract_document(const Mail& s) { return s.doc(); }
inline AddressArray extract_addresses(const Mail& s) { return s.addresses(); }

// Mails received by one address, in sending order.
struct Mailbox {
  Address owner;
  std::vector<Mail> mails;
};

// Lossless, order-preserving transport: every mail listing `owner` as a
// recipient lands in owner's box.
inline Mailbox deliver(const std::vector<Mail>& sent, const Address& owner) {
  Mailbox box{owner, {}};
  for (const auto& m : sent)
    if (m.addresses().contains(owner)) box.mails.push_back(m);
  return box;
}

inline bool sorted_by_date(const std::vector<Mail>& seq) {
  return std::is_sorted(seq.begin(), seq.end(), [](const Mail& a, const Mail& b) { return a.sent_at() < b.sent_at(); });
}

// Linear merge of two date-sorted sequences. Equal timestamps make the bit
// order ambiguous and are rejected.
inline std::vector<Mail> merge_by_date(const std::vector<Mail>& seq1, const std::vector<Mail>& seq2) {
  if (!sorted_by_date(seq1) || !sorted_by_date(seq2)) throw OrderingError("mailbox is not in sending order");
  std::vector<Mail> out;
  out.reserve(seq1.size() + seq2.size());
  auto a = seq1.begin();
  auto b = seq2.begin();
  while (a != seq1.end() && b != seq2.end()) {
    if (a->sent_at() == b->sent_at()) {
      throw OrderingError("two mailboxes hold mails sent at the same time " + std::to_string(a->sent_at()));
    }
    if (a->sent_at() < b->sent_at()) {
      out.push_back(*a++);
    } else {
      out.push_back(*b++);
    }
  }
  out.insert(out.end(), a, seq1.end());
  out.insert(out.end(), b, seq2.end());
  return out;
}

// Mail trace: one mail per line, `sent_at \t doc_id \t addr1[,addr2...]`.
inline void write_trace(std::ostream& out, const std::vector<Mail>& mails) {
  for (const auto& m : mails) {
    if (!m.doc().payload.empty()) throw FramingError("mail trace cannot carry document payloads");
    out << m.sent_at() << '\t' << m.doc().id << '\t';
    bool first = true;
    for (const auto& a : m.addresses()) {
      if (!first) out << ',';
      out << a.name();
      first = false;
    }
    out << '\n';
  }
}

namespace detail {

inline std::uint64_t parse_u64(std::string_view s, std::size_t line_no) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw FramingError("trace line " + std::to_string(line_no) + ": bad integer '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace detail

inline std::vector<Mail> read_trace(std::istream& in) {
  std::vector<Mail> mails;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
      throw FramingError("trace line " + std::to_string(line_no) + ": expected three tab-separated fields");
    }
    const std::string_view view(line);
    const auto sent_at = detail::parse_u64(view.substr(0, tab1), line_no);
    const auto doc_id = detail::parse_u64(view.substr(tab1 + 1, tab2 - tab1 - 1), line_no);
    std::vector<Address> addrs;
    std::string_view rest = view.substr(tab2 + 1);
    while (true) {
      const auto comma = rest.find(',');
      const auto name = rest.substr(0, comma);
      if (name.empty()) throw FramingError("trace line " + std::to_string(line_no) + ": empty address");
      addrs.emplace_back(std::string(name));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    mails.emplace_back(Document(doc_id), AddressArray(std::move(addrs)), sent_at);
  }
  return mails;
}

}  // namespace stegomail
