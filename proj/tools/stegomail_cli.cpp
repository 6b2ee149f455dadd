#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stegomail/bench.hpp"
#include "stegomail/stegomail.hpp"

using namespace stegomail;

namespace {

struct Args {
  std::string channel;
  std::string key_hex;
  std::string key_file;
  std::uint64_t counter = 0;
  std::uint64_t seed = 0;
  std::uint64_t start_tick = 0;
  std::string protocol = "p1";
  std::string system = "p1";
  std::string message;
  bool hex = false;
  std::string out;
  std::string box1;
  std::string box2;
  std::string in;
  std::string in2;
  std::size_t bits = 64;
  std::size_t trials = 100;
  std::size_t count = 0;
  std::size_t copies = 3;
  unsigned repetition = RepetitionCode::kDefaultRepetition;
  std::string prf = "keyed";
  std::string distinguisher = "address";
  std::size_t queries = 1;
  double p = 0.0;
  std::vector<std::size_t> lengths;
  std::vector<std::string> systems;
  std::size_t batches = 5;
};

// "uniform:N", "point:N:ID" or a JSON file.
ChannelSpec load_channel(const std::string& arg) {
  if (arg.empty()) throw ConfigError("--channel is required");
  auto number = [&](const std::string& s) -> std::uint64_t {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used != s.size()) throw ConfigError("bad number in channel '" + arg + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad number in channel '" + arg + "'");
    }
  };
  if (arg.rfind("uniform:", 0) == 0) return ChannelSpec::uniform(number(arg.substr(8)));
  if (arg.rfind("point:", 0) == 0) {
    const auto rest = arg.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ConfigError("expected point:N:ID");
    return ChannelSpec::point_mass(number(rest.substr(0, colon)), number(rest.substr(colon + 1)));
  }
  std::ifstream in(arg);
  if (!in) throw ConfigError("cannot open channel file '" + arg + "'");
  return load_channel_spec(in);
}

Key load_key(const Args& a) {
  if (!a.key_file.empty()) {
    std::ifstream in(a.key_file);
    if (!in) throw ConfigError("cannot open key file '" + a.key_file + "'");
    std::string hex;
    in >> hex;
    return Key::from_hex(hex);
  }
  if (a.key_hex.empty()) throw ConfigError("--key or --key-file is required");
  return Key::from_hex(a.key_hex);
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string to_hex(const Bytes& b) {
  std::ostringstream s;
  for (auto x : b) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(x);
  return s.str();
}

Bytes from_hex_text(const Bytes& raw) {
  std::string hex;
  for (auto c : raw)
    if (!std::isspace(c)) hex.push_back(static_cast<char>(c));
  if (hex.size() % 2) throw ConfigError("hex message has odd length");
  Bytes out;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    auto nib = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw ConfigError("bad hex digit in message");
    };
    out.push_back(static_cast<std::uint8_t>(nib(hex[i]) << 4 | nib(hex[i + 1])));
  }
  return out;
}

std::vector<Mail> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace '" + path + "'");
  return read_trace(in);
}

void write_trace_file(const std::string& path, const std::vector<Mail>& mails) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write_trace(out, mails);
}

Protocol parse_protocol(const std::string& s) {
  if (s == "p1") return Protocol::p1;
  if (s == "p2") return Protocol::p2;
  throw ConfigError("unknown protocol '" + s + "'");
}

PrfMode parse_prf(const std::string& s) {
  if (s == "keyed") return PrfMode::keyed;
  if (s == "random") return PrfMode::random_oracle;
  throw ConfigError("--prf must be keyed or random");
}

SystemConfig system_config(const Args& a, const std::string& system) {
  SystemConfig cfg;
  cfg.kind = parse_system(system);
  cfg.count = a.count;
  cfg.copies = a.copies;
  cfg.repetition = a.repetition;
  cfg.prf = parse_prf(a.prf);
  if (!a.key_hex.empty() || !a.key_file.empty()) cfg.key_bits = load_key(a).bit_length();
  return cfg;
}

// Every CSV starts with the full run configuration as a comment.
void config_header(std::ostream& out, const std::string& command, const Args& a) {
  out << "# config command=" << command << " channel=" << a.channel << " seed=" << a.seed;
  if (command == "simulate" || command == "rate" || command == "attack")
    out << " system=" << a.system << " prf=" << a.prf << " count=" << a.count << " copies=" << a.copies
        << " repetition=" << a.repetition;
  if (command == "simulate" || command == "rate") out << " bits=" << a.bits;
  if (command == "simulate") out << " key=" << (a.key_hex.empty() && a.key_file.empty() ? "fresh" : "fixed");
  if (command == "simulate" || command == "attack") out << " trials=" << a.trials;
  if (command == "attack") out << " distinguisher=" << a.distinguisher << " queries=" << a.queries;
  if (command == "bench") {
    out << " batches=" << a.batches << " systems=";
    for (std::size_t i = 0; i < a.systems.size(); ++i) out << (i ? "," : "") << a.systems[i];
    out << " lengths=";
    for (std::size_t i = 0; i < a.lengths.size(); ++i) out << (i ? "," : "") << a.lengths[i];
  }
  out << '\n';
}

int cmd_embed(const Args& a) {
  const auto proto = parse_protocol(a.protocol);
  const auto spec = load_channel(a.channel);
  if (a.message.empty()) throw ConfigError("--message is required");
  if (a.out.empty()) throw ConfigError("--out is required");
  Bytes msg = read_file(a.message);
  if (a.hex) msg = from_hex_text(msg);

  StegoKeyState state{BitFunction::keyed(load_key(a)), Counter(a.counter)};
  Rng rng(a.seed);
  CoverSource cover(spec, rng);
  History h;
  EmbedStats stats;
  const auto mails = embed(proto, state, bits_from_bytes(msg), h, a.start_tick, cover, stats);

  write_trace_file(a.out, mails);
  if (!a.box1.empty()) write_trace_file(a.box1, deliver(mails, address1()).mails);
  if (!a.box2.empty()) write_trace_file(a.box2, deliver(mails, address2()).mails);
  std::cerr << "embedded " << stats.bits_embedded << " bits in " << mails.size() << " mails; counter now "
            << state.counter.value() << '\n';
  return 0;
}

int cmd_extract(const Args& a) {
  const auto proto = parse_protocol(a.protocol);
  if (a.in.empty()) throw ConfigError("--in is required");
  StegoKeyState state{BitFunction::keyed(load_key(a)), Counter(a.counter)};
  const auto first = read_trace_file(a.in);

  BitString bits;
  if (proto == Protocol::p1) {
    if (a.in2.empty()) {
      // a full sent trace: run it through the transport ourselves
      bits = p1_extract(state, deliver(first, address1()), deliver(first, address2()));
    } else {
      bits = p1_extract(state, Mailbox{address1(), first}, Mailbox{address2(), read_trace_file(a.in2)});
    }
  } else {
    if (!a.in2.empty()) throw ConfigError("p2 takes a single trace");
    bits = p2_extract_multi(state, deliver(first, address1()));
  }
  const Bytes msg = bytes_from_bits(bits);
  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + a.out + "'");
    if (a.hex)
      out << to_hex(msg) << '\n';
    else
      out.write(reinterpret_cast<const char*>(msg.data()), static_cast<std::streamsize>(msg.size()));
  } else {
    std::cout << to_hex(msg) << '\n';
  }
  return 0;
}

int cmd_simulate(const Args& a) {
  const auto cfg = system_config(a, a.system);
  const auto spec = load_channel(a.channel);
  std::optional<Key> key;
  if (!a.key_hex.empty() || !a.key_file.empty()) key = load_key(a);
  if (key && cfg.prf != PrfMode::keyed) throw ConfigError("--key cannot be combined with --prf random");
  if (a.trials == 0) throw ConfigError("--trials must be positive");
  config_header(std::cout, "simulate", a);
  std::cout << "trial,bits,bit_errors,failed,samples_drawn,prf_evaluations,docs_emitted,wall_time\n";
  ReliabilityReport total;
  total.bits = a.bits;
  double wall = 0.0;
  for (std::size_t i = 0; i < a.trials; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = reliability_estimate(cfg, spec, a.bits, 1, Rng::derive(a.seed, i).next(), key);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    wall += secs;
    std::cout << i << ',' << a.bits << ',' << r.bit_errors << ',' << r.failed_messages << ',' << r.stats.samples_drawn
              << ',' << r.stats.prf_evaluations << ',' << r.stats.docs_emitted << ',' << secs << '\n';
    total.trials += 1;
    total.failed_messages += r.failed_messages;
    total.bit_errors += r.bit_errors;
    total.stats += r.stats;
  }
  std::cout << "# aggregate\n";
  std::cout << "system,trials,failure_rate,bit_error_rate,samples_drawn,docs_emitted,wall_time\n";
  std::cout << a.system << ',' << total.trials << ',' << total.message_failure_rate() << ',' << total.bit_error_rate()
            << ',' << total.stats.samples_drawn << ',' << total.stats.docs_emitted << ',' << wall << '\n';
  return 0;
}

int cmd_attack(const Args& a) {
  GameSetup setup{system_config(a, a.system), load_channel(a.channel), a.queries, a.bits};
  const auto g = distinguisher_by_name(a.distinguisher);
  const auto est = run_game(g, setup, a.trials, a.seed);
  config_header(std::cout, "attack", a);
  std::cout << "system,distinguisher,trials,advantage,halfwidth,st_guess_rate,ct_guess_rate\n";
  std::cout << a.system << ',' << g.name << ',' << est.trials << ',' << est.value << ',' << est.confidence_halfwidth
            << ',' << est.p_first << ',' << est.p_second << '\n';
  return 0;
}

int cmd_rate(const Args& a) {
  const auto spec = load_channel(a.channel);
  config_header(std::cout, "rate", a);
  std::cout << "system,bits,docs_emitted,samples_drawn,rate\n";
  const std::vector<std::string> systems = a.systems.empty() ? std::vector<std::string>{a.system} : a.systems;
  for (const auto& s : systems) {
    const auto stats = measure_embedding(system_config(a, s), spec, a.bits, a.seed);
    std::cout << s << ',' << stats.bits_embedded << ',' << stats.docs_emitted << ',' << stats.samples_drawn << ','
              << transmission_rate(stats) << '\n';
  }
  return 0;
}

int cmd_capacity(const Args& a) {
  std::cout << std::setprecision(10) << capacity(a.p) << '\n';
  return 0;
}

int cmd_channel_info(const Args& a) {
  const auto spec = load_channel(a.channel);
  std::cout << "kind: " << (spec.kind() == ChannelKind::stationary ? "stationary" : "markov1") << '\n';
  std::cout << "alphabet_size: " << spec.alphabet_size() << '\n';
  std::cout << "min_entropy: " << std::setprecision(6) << min_entropy(spec, History{}) << '\n';
  const auto& row = spec.row_for(History{});
  std::vector<std::size_t> order(row.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t top = std::min<std::size_t>(5, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t x, std::size_t y) { return row[x] > row[y] || (row[x] == row[y] && x < y); });
  std::cout << "top:\n";
  for (std::size_t i = 0; i < top; ++i) std::cout << "  " << order[i] << ' ' << row[order[i]] << '\n';
  return 0;
}

int cmd_bench(const Args& a) {
  const auto spec = load_channel(a.channel);
  std::vector<SystemConfig> cfgs;
  const std::vector<std::string> systems = a.systems.empty() ? std::vector<std::string>{"p1", "p2"} : a.systems;
  for (const auto& s : systems) cfgs.push_back(system_config(a, s));
  BenchOptions opt;
  opt.lengths = a.lengths;
  if (opt.lengths.empty())
    for (std::size_t n = 1 << 8; n <= (1 << 14); n <<= 1) opt.lengths.push_back(n);
  opt.batches = a.batches;
  opt.seed = a.seed;
  const auto rows = bench(cfgs, spec, opt);
  config_header(std::cout, "bench", a);
  std::cout << "system,n,embed_seconds,extract_seconds,samples_drawn,prf_evaluations,docs_emitted\n";
  for (const auto& r : rows)
    std::cout << to_string(r.system) << ',' << r.n << ',' << r.embed_seconds << ',' << r.extract_seconds << ','
              << r.stats.samples_drawn << ',' << r.stats.prf_evaluations << ',' << r.stats.docs_emitted << '\n';
  std::cout << "# slopes\nsystem,embed_slope,extract_slope\n";
  for (const auto& c : cfgs)
    std::cout << to_string(c.kind) << ',' << time_slope(rows, c.kind) << ',' << time_slope(rows, c.kind, true) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stegomail: black-box steganography over email"};
  app.require_subcommand(1);
  Args a;

  auto key_opts = [&](CLI::App* c) {
    c->add_option("--key", a.key_hex, "key as hex");
    c->add_option("--key-file", a.key_file, "file holding the key as hex");
    c->add_option("--counter", a.counter, "initial counter value")->default_val(0);
  };
  auto system_opts = [&](CLI::App* c) {
    c->add_option("--count", a.count, "S1/S3 iteration budget (0 = key length)");
    c->add_option("--copies", a.copies, "copies t for S3/S4");
    c->add_option("--ecc-repetition", a.repetition, "repetition r for S2");
    c->add_option("--prf", a.prf, "keyed or random");
  };

  auto* embed_cmd = app.add_subcommand("embed", "hide a message file in a mail trace");
  embed_cmd->add_option("--protocol", a.protocol)->required();
  key_opts(embed_cmd);
  embed_cmd->add_option("--message", a.message, "message file")->required();
  embed_cmd->add_flag("--hex", a.hex, "message file holds hex text");
  embed_cmd->add_option("--channel", a.channel)->required();
  embed_cmd->add_option("--seed", a.seed)->required();
  embed_cmd->add_option("--out", a.out, "sent mail trace")->required();
  embed_cmd->add_option("--start-tick", a.start_tick);
  embed_cmd->add_option("--box1", a.box1, "also write the address1 mailbox");
  embed_cmd->add_option("--box2", a.box2, "also write the address2 mailbox");

  auto* extract_cmd = app.add_subcommand("extract", "recover a message from mail traces");
  extract_cmd->add_option("--protocol", a.protocol)->required();
  key_opts(extract_cmd);
  extract_cmd->add_option("--in", a.in, "sent trace, or the address1 mailbox when --in2 is given")->required();
  extract_cmd->add_option("--in2", a.in2, "address2 mailbox (p1)");
  extract_cmd->add_option("--out", a.out, "write the message here instead of printing hex");
  extract_cmd->add_flag("--hex", a.hex, "write --out as hex text");

  auto* simulate_cmd = app.add_subcommand("simulate", "reliability trials");
  simulate_cmd->add_option("--system", a.system)->required();
  simulate_cmd->add_option("--channel", a.channel)->required();
  simulate_cmd->add_option("--key", a.key_hex, "fixed key for every trial (default: fresh per trial)");
  simulate_cmd->add_option("--key-file", a.key_file);
  simulate_cmd->add_option("--bits", a.bits);
  simulate_cmd->add_option("--trials", a.trials);
  simulate_cmd->add_option("--seed", a.seed)->required();
  system_opts(simulate_cmd);

  auto* attack_cmd = app.add_subcommand("attack", "estimate a distinguisher's advantage");
  attack_cmd->add_option("--system", a.system)->required();
  attack_cmd->add_option("--distinguisher", a.distinguisher)->required();
  attack_cmd->add_option("--channel", a.channel)->required();
  attack_cmd->add_option("--trials", a.trials);
  attack_cmd->add_option("--seed", a.seed)->required();
  attack_cmd->add_option("--bits", a.bits, "hiddentext bits per query");
  attack_cmd->add_option("--queries", a.queries);
  system_opts(attack_cmd);

  auto* rate_cmd = app.add_subcommand("rate", "transmission rate");
  rate_cmd->add_option("--system", a.system);
  rate_cmd->add_option("--systems", a.systems)->delimiter(',');
  rate_cmd->add_option("--channel", a.channel)->required();
  rate_cmd->add_option("--bits", a.bits);
  rate_cmd->add_option("--seed", a.seed)->required();
  system_opts(rate_cmd);

  auto* capacity_cmd = app.add_subcommand("capacity", "binary symmetric channel capacity");
  capacity_cmd->add_option("--p", a.p)->required();

  auto* info_cmd = app.add_subcommand("channel-info", "summarize a channel");
  info_cmd->add_option("--channel", a.channel)->required();

  auto* bench_cmd = app.add_subcommand("bench", "embed/extract timing against message length");
  bench_cmd->add_option("--systems", a.systems)->delimiter(',');
  bench_cmd->add_option("--channel", a.channel)->required();
  bench_cmd->add_option("--lengths", a.lengths)->delimiter(',');
  bench_cmd->add_option("--batches", a.batches);
  bench_cmd->add_option("--seed", a.seed)->required();
  system_opts(bench_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*embed_cmd) return cmd_embed(a);
    if (*extract_cmd) return cmd_extract(a);
    if (*simulate_cmd) return cmd_simulate(a);
    if (*attack_cmd) return cmd_attack(a);
    if (*rate_cmd) return cmd_rate(a);
    if (*capacity_cmd) return cmd_capacity(a);
    if (*info_cmd) return cmd_channel_info(a);
    if (*bench_cmd) return cmd_bench(a);
  } catch (const CounterError& e) {
    std::cerr << "counter error: " << e.what() << '\n';
    return 4;
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
