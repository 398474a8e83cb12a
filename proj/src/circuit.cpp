#include "ring3pc/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

#include "ring3pc/nonlinear.hpp"

namespace ring3pc {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(std::string("bad ") + what + " '" + std::string(s) + "'", line);
  return v;
}

// Decimal (possibly negative) or 0x-hex, reduced mod 2^ell.
RingElem parse_value(std::string_view s, unsigned ell, std::size_t line) {
  bool neg = !s.empty() && s[0] == '-';
  if (neg) s.remove_prefix(1);
  RingElem v(parse_u64(s, line, "value"), ell);
  return neg ? -v : v;
}

std::uint32_t parse_wire(std::string_view s, std::size_t line) {
  std::uint64_t v = parse_u64(s, line, "wire id");
  if (v >= (std::uint64_t{1} << 24)) throw ParseError("wire id too large", line);
  return static_cast<std::uint32_t>(v);
}

PartyId parse_owner(std::string_view s, std::size_t line) {
  if (s == "0" || s == "P0") return PartyId::P0;
  if (s == "1" || s == "P1") return PartyId::P1;
  if (s == "2" || s == "P2") return PartyId::P2;
  throw ParseError("input owner must be 0, 1 or 2", line);
}

const char* op_name(Op op) {
  switch (op) {
    case Op::Input: return "INPUT";
    case Op::Const: return "CONST";
    case Op::Add: return "ADD";
    case Op::Scale: return "SCALE";
    case Op::Mul: return "MUL";
    case Op::Dot: return "DOT";
    case Op::Trunc: return "TRUNC";
    case Op::Relu: return "RELU";
    case Op::Maxpool: return "MAXPOOL";
  }
  return "?";
}

bool interactive(Op op) { return op != Op::Const && op != Op::Add && op != Op::Scale; }

}  // namespace

Circuit parse_circuit(std::string_view text, unsigned ell) {
  Circuit c;
  c.ell = ell;
  std::vector<bool> defined;
  auto use = [&](std::uint32_t w, std::size_t line) {
    if (w >= defined.size() || !defined[w]) throw ParseError("wire " + std::to_string(w) + " read before it is defined", line);
  };
  auto def = [&](std::uint32_t w, std::size_t line) {
    if (w >= defined.size()) defined.resize(w + 1, false);
    if (defined[w]) throw ParseError("wire " + std::to_string(w) + " defined twice", line);
    defined[w] = true;
    c.wires = std::max(c.wires, w + 1);
  };
  std::size_t line = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line;
    if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
    auto tok = split(raw);
    if (tok.empty()) continue;
    const std::string_view kw = tok[0];
    auto need = [&](std::size_t n) {
      if (tok.size() != n) throw ParseError(std::string(kw) + " expects " + std::to_string(n - 1) + " operands", line);
    };
    Gate g;
    g.line = line;
    if (kw == "OUTPUT") {
      need(2);
      auto w = parse_wire(tok[1], line);
      use(w, line);
      c.outputs.push_back(w);
      continue;
    }
    if (kw == "INPUT") {
      need(3);
      g.op = Op::Input;
      g.out = parse_wire(tok[1], line);
      g.owner = parse_owner(tok[2], line);
    } else if (kw == "CONST") {
      need(3);
      g.op = Op::Const;
      g.out = parse_wire(tok[1], line);
      g.c = parse_value(tok[2], ell, line).value();
    } else if (kw == "ADD" || kw == "MUL") {
      need(4);
      g.op = kw == "ADD" ? Op::Add : Op::Mul;
      g.out = parse_wire(tok[1], line);
      g.in = {parse_wire(tok[2], line), parse_wire(tok[3], line)};
    } else if (kw == "SCALE") {
      need(4);
      g.op = Op::Scale;
      g.out = parse_wire(tok[1], line);
      g.c = parse_value(tok[2], ell, line).value();
      g.in = {parse_wire(tok[3], line)};
    } else if (kw == "DOT" || kw == "MAXPOOL") {
      if (tok.size() < 3) throw ParseError(std::string(kw) + " expects a wire and a length", line);
      g.op = kw == "DOT" ? Op::Dot : Op::Maxpool;
      g.out = parse_wire(tok[1], line);
      const std::uint64_t n = parse_u64(tok[2], line, "length");
      if (n == 0 || n > (1u << 20)) throw ParseError("length must be in 1..2^20", line);
      need(3 + (g.op == Op::Dot ? 2 : 1) * n);
      for (std::size_t i = 3; i < tok.size(); ++i) g.in.push_back(parse_wire(tok[i], line));
    } else if (kw == "TRUNC") {
      need(4);
      g.op = Op::Trunc;
      g.out = parse_wire(tok[1], line);
      g.in = {parse_wire(tok[2], line)};
      g.t = static_cast<unsigned>(parse_u64(tok[3], line, "shift"));
      if (g.t >= ell) throw ParseError("shift must be below the ring width", line);
    } else if (kw == "RELU") {
      need(3);
      g.op = Op::Relu;
      g.out = parse_wire(tok[1], line);
      g.in = {parse_wire(tok[2], line)};
    } else {
      throw ParseError("unknown gate '" + std::string(kw) + "'", line);
    }
    for (auto w : g.in) use(w, line);
    def(g.out, line);
    c.gates.push_back(std::move(g));
  }
  return c;
}

std::string Circuit::to_text() const {
  std::ostringstream o;
  for (const auto& g : gates) {
    o << op_name(g.op) << ' ' << g.out;
    switch (g.op) {
      case Op::Input: o << ' ' << idx(g.owner); break;
      case Op::Const: o << " 0x" << std::hex << g.c << std::dec; break;
      case Op::Scale: o << " 0x" << std::hex << g.c << std::dec << ' ' << g.in[0]; break;
      case Op::Dot: o << ' ' << g.in.size() / 2; for (auto w : g.in) o << ' ' << w; break;
      case Op::Maxpool: o << ' ' << g.in.size(); for (auto w : g.in) o << ' ' << w; break;
      case Op::Trunc: o << ' ' << g.in[0] << ' ' << g.t; break;
      default: for (auto w : g.in) o << ' ' << w; break;
    }
    o << '\n';
  }
  for (auto w : outputs) o << "OUTPUT " << w << '\n';
  return o.str();
}

std::vector<RingElem> plain_eval(const Circuit& c, const InputMap& inputs) {
  const RingElem zero(0, c.ell);
  std::vector<RingElem> w(c.wires, zero);
  for (const auto& g : c.gates) {
    switch (g.op) {
      case Op::Input: {
        auto it = inputs.find(g.out);
        if (it == inputs.end()) throw ConfigError("no value for input wire " + std::to_string(g.out));
        w[g.out] = RingElem(it->second.value(), c.ell);
        break;
      }
      case Op::Const: w[g.out] = RingElem(g.c, c.ell); break;
      case Op::Add: w[g.out] = w[g.in[0]] + w[g.in[1]]; break;
      case Op::Scale: w[g.out] = w[g.in[0]] * RingElem(g.c, c.ell); break;
      case Op::Mul: w[g.out] = w[g.in[0]] * w[g.in[1]]; break;
      case Op::Dot: {
        const std::size_t n = g.in.size() / 2;
        RingElem acc = zero;
        for (std::size_t i = 0; i < n; ++i) acc += w[g.in[i]] * w[g.in[n + i]];
        w[g.out] = acc;
        break;
      }
      case Op::Trunc: w[g.out] = w[g.in[0]].ashr(g.t); break;
      case Op::Relu: w[g.out] = w[g.in[0]].signed_value() >= 0 ? w[g.in[0]] : zero; break;
      case Op::Maxpool: {
        RingElem m = w[g.in[0]];
        for (auto i : g.in)
          if (w[i].signed_value() > m.signed_value()) m = w[i];
        w[g.out] = m;
        break;
      }
    }
  }
  std::vector<RingElem> out;
  for (auto o : c.outputs) out.push_back(w[o]);
  return out;
}

std::vector<Wire> eval_circuit(Evaluator& ev, const Circuit& c, const InputMap& inputs) {
  const unsigned ell = c.ell;
  const PartyId me = ev.id();
  std::vector<std::optional<Wire>> w(c.wires);
  std::vector<bool> done(c.gates.size(), false);
  std::vector<int> producer(c.wires, -1);
  for (std::size_t i = 0; i < c.gates.size(); ++i) producer[c.gates[i].out] = static_cast<int>(i);
  // First TRUNC reading each MUL/DOT output rides on that gate's mask.
  std::vector<int> fused(c.gates.size(), -1);
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const auto& g = c.gates[i];
    if (g.op != Op::Trunc) continue;
    const int p = producer[g.in[0]];
    if (p >= 0 && (c.gates[p].op == Op::Mul || c.gates[p].op == Op::Dot) && fused[p] < 0) fused[p] = static_cast<int>(i);
  }
  std::vector<bool> is_fused(c.gates.size(), false);
  for (int f : fused)
    if (f >= 0) is_fused[f] = true;

  auto ready = [&](const Gate& g) {
    for (auto i : g.in)
      if (!w[i]) return false;
    return true;
  };
  std::size_t remaining = c.gates.size();
  while (remaining > 0) {
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto& g = c.gates[i];
        if (done[i] || interactive(g.op) || !ready(g)) continue;
        switch (g.op) {
          case Op::Const: w[g.out] = ev.constant(ell, g.c); break;
          case Op::Add: w[g.out] = *w[g.in[0]] + *w[g.in[1]]; break;
          case Op::Scale: w[g.out] = scale(*w[g.in[0]], RingElem(g.c, ell)); break;
          default: break;
        }
        done[i] = true;
        --remaining;
        progress = true;
      }
    }
    if (remaining == 0) break;

    std::array<std::vector<std::size_t>, 3> ins;
    std::vector<std::size_t> plain, relus, pools;
    std::map<unsigned, std::vector<std::size_t>> with_trunc, truncs;
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      const auto& g = c.gates[i];
      if (done[i] || !interactive(g.op) || is_fused[i] || !ready(g)) continue;
      switch (g.op) {
        case Op::Input: ins[idx(g.owner)].push_back(i); break;
        case Op::Mul:
        case Op::Dot:
          if (fused[i] >= 0) with_trunc[c.gates[fused[i]].t].push_back(i);
          else plain.push_back(i);
          break;
        case Op::Trunc: truncs[g.t].push_back(i); break;
        case Op::Relu: relus.push_back(i); break;
        case Op::Maxpool: pools.push_back(i); break;
        default: break;
      }
    }
    auto finish = [&](std::size_t i) {
      done[i] = true;
      --remaining;
    };
    bool any = false;
    for (auto owner : kParties) {
      const auto& ids = ins[idx(owner)];
      if (ids.empty()) continue;
      any = true;
      std::vector<RingElem> vals;
      if (me == owner) {
        for (auto i : ids) {
          auto it = inputs.find(c.gates[i].out);
          if (it == inputs.end()) throw ConfigError("no value for input wire " + std::to_string(c.gates[i].out));
          vals.push_back(RingElem(it->second.value(), ell));
        }
      }
      auto got = ev.input(owner, ell, vals, ids.size());
      for (std::size_t k = 0; k < ids.size(); ++k) {
        w[c.gates[ids[k]].out] = got[k];
        finish(ids[k]);
      }
    }
    auto task_of = [&](const Gate& g) {
      GateTask<RingElem> t;
      const std::size_t n = g.op == Op::Mul ? 1 : g.in.size() / 2;
      for (std::size_t k = 0; k < n; ++k) {
        t.x.push_back(*w[g.in[k]]);
        t.y.push_back(*w[g.in[n + k]]);
      }
      return t;
    };
    if (!plain.empty()) {
      any = true;
      std::vector<GateTask<RingElem>> tasks;
      for (auto i : plain) tasks.push_back(task_of(c.gates[i]));
      auto z = ev.gates(ell, tasks);
      for (std::size_t k = 0; k < plain.size(); ++k) {
        w[c.gates[plain[k]].out] = z[k];
        finish(plain[k]);
      }
    }
    for (const auto& [t, ids] : with_trunc) {
      any = true;
      std::vector<GateTask<RingElem>> tasks;
      for (auto i : ids) tasks.push_back(task_of(c.gates[i]));
      std::vector<Wire> pre;
      auto z = ev.gates(ell, tasks, t, &pre);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        w[c.gates[ids[k]].out] = pre[k];
        finish(ids[k]);
        const auto f = static_cast<std::size_t>(fused[ids[k]]);
        w[c.gates[f].out] = z[k];
        finish(f);
      }
    }
    for (const auto& [t, ids] : truncs) {
      any = true;
      std::vector<Wire> xs;
      for (auto i : ids) xs.push_back(*w[c.gates[i].in[0]]);
      auto z = ev.trunc(xs, t);
      for (std::size_t k = 0; k < ids.size(); ++k) {
        w[c.gates[ids[k]].out] = z[k];
        finish(ids[k]);
      }
    }
    if (!relus.empty()) {
      any = true;
      std::vector<Wire> xs;
      for (auto i : relus) xs.push_back(*w[c.gates[i].in[0]]);
      auto z = relu(ev, xs);
      for (std::size_t k = 0; k < relus.size(); ++k) {
        w[c.gates[relus[k]].out] = z[k];
        finish(relus[k]);
      }
    }
    if (!pools.empty()) {
      any = true;
      std::vector<std::vector<Wire>> groups;
      for (auto i : pools) {
        std::vector<Wire> g;
        for (auto in : c.gates[i].in) g.push_back(*w[in]);
        groups.push_back(std::move(g));
      }
      auto z = maxpool(ev, groups);
      for (std::size_t k = 0; k < pools.size(); ++k) {
        w[c.gates[pools[k]].out] = z[k];
        finish(pools[k]);
      }
    }
    if (!any) throw HarnessError("circuit schedule made no progress");
  }
  std::vector<Wire> out;
  for (auto o : c.outputs) out.push_back(*w[o]);
  return out;
}

InputMap parse_inputs(std::string_view text, unsigned ell) {
  InputMap m;
  std::size_t line = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line;
    if (auto h = raw.find('#'); h != std::string_view::npos) raw = raw.substr(0, h);
    auto tok = split(raw);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw ParseError("input lines are 'wire value'", line);
    m[parse_wire(tok[0], line)] = parse_value(tok[1], ell, line);
  }
  return m;
}

}  // namespace ring3pc
