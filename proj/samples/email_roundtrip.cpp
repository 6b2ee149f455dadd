// Hides a short text in ordinary-looking mail traffic with both protocols and
// reads it back from the receiver's mailboxes.
#include <iostream>
#include <string>

#include "stegomail/stegomail.hpp"

using namespace stegomail;

int main(int argc, char** argv) {
  const std::string text = argc > 1 ? argv[1] : "meet at noon";
  const Bytes msg(text.begin(), text.end());

  const auto channel = ChannelSpec::markov1({0.5, 0.3, 0.2}, {{0.7, 0.2, 0.1}, {0.1, 0.8, 0.1}, {0.3, 0.3, 0.4}});
  Rng rng(2024);
  const Key key = Key::random(rng);
  std::cout << "key " << key.to_hex() << "\n";

  for (auto p : {Protocol::p1, Protocol::p2}) {
    StegoKeyState alice{BitFunction::keyed(key), Counter(0)};
    StegoKeyState bob{BitFunction::keyed(key), Counter(0)};
    CoverSource cover(channel, rng);
    History h;
    EmbedStats stats;
    const auto sent = embed(p, alice, bits_from_bytes(msg), h, 1000, cover, stats);

    const Mailbox box1 = deliver(sent, address1());
    const Mailbox box2 = deliver(sent, address2());
    const BitString bits = p == Protocol::p1 ? p1_extract(bob, box1, box2) : p2_extract_multi(bob, box1);
    const Bytes back = bytes_from_bits(bits);

    std::cout << (p == Protocol::p1 ? "p1" : "p2") << ": " << sent.size() << " mails, " << stats.samples_drawn
              << " documents drawn, box1 " << box1.mails.size() << ", box2 " << box2.mails.size() << " -> \""
              << std::string(back.begin(), back.end()) << "\"\n";
    write_trace(std::cout, {sent.begin(), sent.begin() + std::min<std::size_t>(4, sent.size())});
    if (back != msg) return 1;
  }
  return 0;
}
