#include "ring3pc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace ring3pc {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty())
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    double x = std::stod(std::string(v), &used);
    if (used != v.size() || !(x > 0)) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(std::string(key) + ": expected a positive number, got '" + std::string(v) + "'");
  }
}

unsigned to_unsigned(std::string_view key, std::string_view v) {
  auto x = to_u64(key, v);
  if (x > 0xffffffffULL) throw ConfigError(std::string(key) + ": value too large");
  return static_cast<unsigned>(x);
}

PartyId to_party(std::string_view key, std::string_view v) {
  try {
    return party_from_string(v);
  } catch (const std::exception&) {
    throw ConfigError(std::string(key) + ": expected P0, P1 or P2, got '" + std::string(v) + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  if (ell < 1 || ell > 64) throw ConfigError("ell must be in 1..64");
  const auto& ds = GrModulus::supported_degrees();
  if (std::find(ds.begin(), ds.end(), d) == ds.end()) throw ConfigError("d must be one of 1, 2, 4, 8, 16, 32, 64");
  if (R && *R > 40) throw ConfigError("R must be at most 40");
  if (d == 1 && R && *R > 0) throw ConfigError("d = 1 supports only R = 0");
  if (k + 1 >= 64) throw ConfigError("k must be below 63");
  if (!(net.rtt_ms >= 0) || !(net.mbps > 0)) throw ConfigError("network profile needs rtt_ms >= 0 and mbps > 0");
  if (!adversary.empty()) parse_adversary(adversary);
}

SessionConfig RunConfig::session() const {
  validate();
  SessionConfig s;
  s.seed = seed;
  s.verify_opts.d = d;
  s.verify_opts.R = R;
  s.verify_opts.net = net;
  s.adder = adder;
  if (!adversary.empty()) s.adversary = parse_adversary(adversary);
  return s;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "ell") {
    c.ell = to_unsigned(key, v);
  } else if (key == "d") {
    c.d = to_unsigned(key, v);
  } else if (key == "R") {
    if (v == "auto")
      c.R.reset();
    else
      c.R = to_unsigned(key, v);
  } else if (key == "seed") {
    c.seed = to_u64(key, v);
  } else if (key == "net") {
    c.net = profile_from_string(v);
  } else if (key == "rtt_ms") {
    c.net.rtt_ms = to_double(key, v);
    c.net.name = "custom";
  } else if (key == "mbps") {
    c.net.mbps = to_double(key, v);
    c.net.name = "custom";
  } else if (key == "adversary") {
    c.adversary = v;
  } else if (key == "adder") {
    if (v == "ripple")
      c.adder = AdderKind::Ripple;
    else if (v == "prefix")
      c.adder = AdderKind::Prefix;
    else
      throw ConfigError("adder: expected ripple or prefix, got '" + v + "'");
  } else if (key == "k") {
    c.k = to_unsigned(key, v);
  } else if (key == "model_owner") {
    c.model_owner = to_party(key, v);
  } else if (key == "data_owner") {
    c.data_owner = to_party(key, v);
  } else {
    throw ConfigError("unknown setting '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line;
    if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
    const std::string l = trim(raw);
    if (l.empty()) continue;
    auto eq = l.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key=value");
    try {
      apply_setting(base, trim(std::string_view(l).substr(0, eq)), std::string_view(l).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line) + ": " + e.what());
    }
  }
  return base;
}

void apply_env(RunConfig& c) {
  if (const char* s = std::getenv("RING3PC_SEED")) c.seed = to_u64("RING3PC_SEED", s);
}

AdversaryConfig parse_adversary(std::string_view spec) {
  auto bad = [&](const std::string& why) { return ConfigError("adversary '" + std::string(spec) + "': " + why); };
  auto c1 = spec.find(':');
  auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw bad("expected PARTY:HOOK:ERROR");
  AdversaryConfig a;
  try {
    a.corrupted = party_from_string(spec.substr(0, c1));
  } catch (const std::exception&) {
    throw bad("unknown party");
  }
  Injection inj;
  inj.hook = std::string(spec.substr(c1 + 1, c2 - c1 - 1));
  if (inj.hook.empty()) throw bad("empty hook");
  std::string_view rest = spec.substr(c2 + 1);
  std::string_view word, occ;
  if (auto h = rest.find('#'); h != std::string_view::npos) {
    word = rest.substr(h + 1);
    rest = rest.substr(0, h);
    if (word.empty()) throw bad("empty word index");
  }
  if (auto at = rest.find('@'); at != std::string_view::npos) {
    occ = rest.substr(at + 1);
    rest = rest.substr(0, at);
    if (occ.empty()) throw bad("empty occurrence");
  }
  bool neg = false;
  if (!rest.empty() && (rest[0] == '+' || rest[0] == '-')) {
    neg = rest[0] == '-';
    rest.remove_prefix(1);
  }
  std::uint64_t e = 0;
  auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), e);
  if (rest.empty() || ec != std::errc() || p != rest.data() + rest.size()) throw bad("bad error value");
  inj.error = neg ? 0 - e : e;
  if (occ == "*")
    inj.occurrence.reset();
  else
    inj.occurrence = occ.empty() ? 0 : to_u64("occurrence", occ);
  if (!word.empty()) inj.word = to_u64("word", word);
  a.injections.push_back(std::move(inj));
  return a;
}

}  // namespace ring3pc
