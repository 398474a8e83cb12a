#include "ring3pc/experiments.hpp"

#include <charconv>
#include <cstdio>
#include <random>
#include <sstream>

#include "ring3pc/errors.hpp"
#include "ring3pc/galois.hpp"

namespace ring3pc {

namespace {

std::uint64_t payload(const Transcript& t, Phase ph, std::string_view prefix) {
  std::uint64_t s = 0;
  for (const auto& [key, v] : t.hook_totals())
    if (key.first == ph && key.second.starts_with(prefix)) s += v;
  return s;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

std::uint64_t nonzero(std::mt19937_64& g, unsigned ell) {
  for (;;)
    if (std::uint64_t e = g() & width_mask(ell)) return e;
}

/// G random multiplications in one round, nothing opened.
Program mul_round(unsigned ell, std::size_t G) {
  return [ell, G](Evaluator& ev) {
    auto x = ev.random(ell, G);
    auto y = ev.random(ell, G);
    ev.mul(x, y);
    return std::vector<Wire>{};
  };
}

}  // namespace

BenchOp bench_op_from_string(std::string_view s) {
  if (s == "mul") return BenchOp::Mul;
  if (s == "dot") return BenchOp::Dot;
  if (s == "dot-trunc") return BenchOp::DotTrunc;
  throw ConfigError("unknown bench op '" + std::string(s) + "' (mul, dot, dot-trunc)");
}

std::string to_string(BenchOp op) {
  switch (op) {
    case BenchOp::Mul:
      return "mul";
    case BenchOp::Dot:
      return "dot";
    case BenchOp::DotTrunc:
      return "dot-trunc";
  }
  return "?";
}

BenchReport run_bench(BenchOp op, std::size_t n, std::size_t batch, const RunConfig& cfg, bool verify) {
  if (batch == 0 || (op != BenchOp::Mul && n == 0)) throw ConfigError("bench: n and batch must be positive");
  SessionConfig sc = cfg.session();
  sc.verify = verify;
  const unsigned ell = cfg.ell, t = cfg.k;
  if (op == BenchOp::DotTrunc && t >= ell) throw ConfigError("bench: k must be below ell for dot-trunc");
  Program prog = [&](Evaluator& ev) {
    if (op == BenchOp::Mul) {
      auto x = ev.random(ell, batch);
      auto y = ev.random(ell, batch);
      ev.mul(x, y);
      return std::vector<Wire>{};
    }
    auto x = ev.random(ell, n * batch);
    auto y = ev.random(ell, n * batch);
    std::vector<GateTask<RingElem>> tasks(batch);
    for (std::size_t b = 0; b < batch; ++b) {
      tasks[b].x.assign(x.begin() + b * n, x.begin() + (b + 1) * n);
      tasks[b].y.assign(y.begin() + b * n, y.begin() + (b + 1) * n);
    }
    if (op == BenchOp::DotTrunc)
      ev.gates(ell, tasks, t);
    else
      ev.gates(ell, tasks);
    return std::vector<Wire>{};
  };
  SessionResult res = run_session(sc, prog);
  if (res.aborted) throw HarnessError("bench session aborted: " + res.abort_reason);
  const Transcript& tr = res.transcript;
  const std::uint64_t wb = wire_bytes(ell);

  BenchReport r{};
  r.op = op;
  r.ell = ell;
  r.d = cfg.d;
  r.n = op == BenchOp::Mul ? 1 : n;
  r.batch = batch;
  r.verified = res.verified;
  r.offline_bytes = tr.total(Phase::Preprocessing, ByteClass::Payload);
  r.offline_formula = batch * (op == BenchOp::DotTrunc ? 7 : 1) * wb;
  // Only the gate round; inputs here are random and cost nothing online.
  r.online_bytes = tr.total(Phase::Online, ByteClass::Payload);
  r.online_formula = batch * 2 * wb;
  r.online_rounds = tr.rounds(Phase::Online);
  r.R = res.plans.empty() ? 0 : res.plans.front().R;
  const std::uint64_t gb = std::uint64_t{cfg.d} * wb;
  for (const auto& pl : res.plans) {
    auto c = verify_cost(pl.n, pl.R);
    r.verify_model += (c.online_elems + c.deal_elems) * gb;
    r.verify_model_rounds += c.online_rounds + c.deal_rounds;
    r.verify_reference += mulv_online_formula_bits(pl.n, pl.R, ell, cfg.d) / 8;
    r.verify_reference_rounds += pl.R + 2;
  }
  r.verify_bytes = payload(tr, Phase::Postprocessing, "vrf.") + payload(tr, Phase::Postprocessing, "rec.");
  r.verify_rounds = tr.rounds(Phase::Postprocessing);
  r.offline_s = cfg.net.seconds(tr.rounds(Phase::Preprocessing), r.offline_bytes);
  r.online_s = cfg.net.seconds(r.online_rounds, r.online_bytes);
  r.verify_s = cfg.net.seconds(r.verify_rounds, r.verify_bytes);
  return r;
}

std::string bench_csv_header() { return "op,ell,d,R,n,batch,phase,measured_bytes,formula_bytes,measured_rounds,formula_rounds,latency_s\n"; }

std::string bench_csv(const BenchReport& r) {
  std::ostringstream o;
  auto row = [&](const char* phase, std::uint64_t mb, std::uint64_t fb, std::uint64_t mr, std::uint64_t fr, double s) {
    o << to_string(r.op) << ',' << r.ell << ',' << r.d << ',' << r.R << ',' << r.n << ',' << r.batch << ',' << phase << ',' << mb << ','
      << fb << ',' << mr << ',' << fr << ',' << s << '\n';
  };
  row("offline", r.offline_bytes, r.offline_formula, 0, 0, r.offline_s);
  row("online", r.online_bytes, r.online_formula, r.online_rounds, 1, r.online_s);
  if (r.verify_rounds) {
    row("verify", r.verify_bytes, r.verify_model, r.verify_rounds, r.verify_model_rounds, r.verify_s);
    row("verify_reference", r.verify_bytes, r.verify_reference, r.verify_rounds, r.verify_reference_rounds, r.verify_s);
  }
  return o.str();
}

const std::vector<ReferenceCost>& reference_costs() {
  static const std::vector<ReferenceCost> t{
      {"ABY3", BenchOp::Mul, 12, 0, 9, 0},       {"BLAZE", BenchOp::Mul, 3, 0, 3, 0},      {"SWIFT", BenchOp::Mul, 3, 0, 3, 0},
      {"ABY3", BenchOp::Dot, 0, 12, 0, 9},       {"BLAZE", BenchOp::Dot, 0, 3, 3, 0},      {"SWIFT", BenchOp::Dot, 3, 0, 3, 0},
      {"ABY3", BenchOp::DotTrunc, 84, 12, 3, 9}, {"BLAZE", BenchOp::DotTrunc, 2, 3, 3, 0}, {"SWIFT", BenchOp::DotTrunc, 15, 0, 3, 0},
  };
  return t;
}

ErrorSpec parse_error_mode(std::string_view s) {
  if (s == "random") return {ErrorMode::Random};
  if (s == "msb") return {ErrorMode::Msb};
  if (s == "gamma") return {ErrorMode::Gamma};
  if (s == "mz") return {ErrorMode::Mz};
  if (s.starts_with("crafted:")) {
    std::string_view h = s.substr(8);
    if (h.starts_with("0x")) h.remove_prefix(2);
    std::uint64_t e = 0;
    auto [p, ec] = std::from_chars(h.data(), h.data() + h.size(), e, 16);
    if (h.empty() || ec != std::errc() || p != h.data() + h.size() || e == 0)
      throw ConfigError("crafted error must be nonzero hex, got '" + std::string(s) + "'");
    return {ErrorMode::Crafted, e};
  }
  throw ConfigError("unknown error mode '" + std::string(s) + "' (random, msb, gamma, mz, crafted:<hex>)");
}

std::string to_string(const ErrorSpec& m) {
  switch (m.mode) {
    case ErrorMode::Random:
      return "random";
    case ErrorMode::Msb:
      return "msb";
    case ErrorMode::Gamma:
      return "gamma";
    case ErrorMode::Mz:
      return "mz";
    case ErrorMode::Crafted: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "crafted:%llx", static_cast<unsigned long long>(m.crafted));
      return buf;
    }
  }
  return "?";
}

std::vector<SoundnessRow> run_soundness(const ErrorSpec& mode, unsigned ell, unsigned d, unsigned R, std::size_t G, std::size_t trials,
                                        std::uint64_t seed) {
  if (G == 0) throw ConfigError("soundness: G must be positive");
  const Program prog = mul_round(ell, G);
  std::vector<SoundnessRow> rows;
  rows.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto g = trial_rng(seed, t);
    const std::size_t gate = std::uniform_int_distribution<std::size_t>(0, G - 1)(g);
    PartyId who = PartyId::P1;
    std::uint64_t e = 0;
    switch (mode.mode) {
      case ErrorMode::Random:
        who = kParties[std::uniform_int_distribution<unsigned>(0, 2)(g)];
        e = nonzero(g, ell);
        break;
      case ErrorMode::Msb:
        who = PartyId::P2;
        e = std::uint64_t{1} << (ell - 1);
        break;
      case ErrorMode::Gamma:
        who = PartyId::P0;
        e = nonzero(g, ell);
        break;
      case ErrorMode::Mz:
        who = PartyId::P1;
        e = nonzero(g, ell);
        break;
      case ErrorMode::Crafted:
        who = PartyId::P1;
        e = mode.crafted & width_mask(ell);
        break;
    }
    Injection inj;
    inj.hook = who == PartyId::P0 ? "gamma" : "mz";
    inj.occurrence = 0;
    inj.word = gate;
    inj.error = e;
    SessionConfig sc;
    sc.seed = seed ^ (0x9e3779b97f4a7c15ULL * (t + 1));
    sc.session_id = t;
    sc.verify_opts.d = d;
    sc.verify_opts.R = R;
    sc.adversary.corrupted = who;
    sc.adversary.injections.push_back(inj);
    SessionResult res = run_session(sc, prog);
    std::ostringstream at;
    at << to_string(who) << ':' << inj.hook << ":+" << e << "@0#" << gate;
    rows.push_back({t, at.str(), res.aborted || !res.verified});
  }
  return rows;
}

std::vector<bool> run_control(unsigned ell, std::size_t G, std::size_t trials, std::uint64_t seed) {
  if (G == 0) throw ConfigError("control: G must be positive");
  const GrRing& ring = GrRing::get(ell, 1);
  const Program prog = mul_round(ell, G);
  std::vector<bool> accepted;
  accepted.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    auto g = trial_rng(seed ^ 0x636f6e74726f6cULL, t);
    Injection inj;
    inj.hook = "mz";
    inj.occurrence = 0;
    inj.word = std::uniform_int_distribution<std::size_t>(0, G - 1)(g);
    inj.error = std::uint64_t{1} << (ell - 1);
    SessionConfig sc;
    sc.seed = seed ^ (0x9e3779b97f4a7c15ULL * (t + 1));
    sc.session_id = t;
    sc.verify = false;
    sc.keep_logs = true;
    sc.adversary.corrupted = PartyId::P2;
    sc.adversary.injections.push_back(inj);
    SessionResult res = run_session(sc, prog);
    const auto* l1 = res.logs[1].find(ell);
    const auto* l2 = res.logs[2].find(ell);
    if (!l1 || !l2 || l1->muls.size() != G || l2->muls.size() != G) throw HarnessError("control: gate logs missing");
    // P1 holds (m, r1) and P2 (m', r2); the honest P1's m is the agreed value.
    auto open = [](const Masked<RingElem>& s1, const Masked<RingElem>& s2) { return s1.a - s1.b - s2.b; };
    const GrElem r = GrElem::embed(ring, g());
    GrElem acc(ring), pw = r;
    for (std::size_t i = 0; i < G; ++i) {
      const auto &a = l1->muls[i], &b = l2->muls[i];
      const RingElem e = open(a.x, b.x) * open(a.y, b.y) - open(a.z, b.z);
      acc += pw * GrElem::embed(ring, e);
      pw = pw * r;
    }
    accepted.push_back(acc.is_zero());
  }
  return accepted;
}

std::string soundness_csv_header() { return "trial,injected_at,detected\n"; }

std::string soundness_csv(const std::vector<SoundnessRow>& rows) {
  std::ostringstream o;
  for (const auto& r : rows) o << r.trial << ',' << r.injected_at << ',' << (r.detected ? 1 : 0) << '\n';
  return o.str();
}

}  // namespace ring3pc
