#include "ring3pc/nonlinear.hpp"

namespace ring3pc {

namespace {

// ⟨b⟩ with m = 0 and r = −b for a bit held by P0 and P_k (slot a for k = 1, slot b for k = 2).
Wire seeded_bit(PartyId p, PartyId k, RingElem negb, RingElem zero) {
  if (p == PartyId::P0) return k == PartyId::P1 ? Wire{negb, zero} : Wire{zero, negb};
  if (p == k) return {zero, negb};
  return {zero, zero};
}

// ⟨b⟩ with r = 0 and m = b for a bit held by P1 and P2.
Wire public_to_12(PartyId p, RingElem b, RingElem zero) {
  if (p == PartyId::P0) return {zero, zero};
  return {b, zero};
}

std::vector<RingElem> draw_bits(Party& p, Pair s, const char* label, std::size_t n, unsigned ell) {
  std::vector<RingElem> out(n, RingElem(0, ell));
  if (!holds(p.id(), s)) return out;
  Prg& g = p.stream(s, label);
  for (auto& v : out) v = RingElem(g.next_bit(), ell);
  return out;
}

Wire xor1(const Wire& a, const Wire& b) { return a + b; }

}  // namespace

std::vector<DaBit> dabits_gen(Party& p, unsigned ell, std::size_t n) {
  const PartyId me = p.id();
  const RingElem zero(0, ell), zero1(0, 1), two(2, ell);
  auto r1 = draw_bits(p, Pair::P01, "dabit", n, ell);
  auto r2 = draw_bits(p, Pair::P02, "dabit", n, ell);
  auto r3 = draw_bits(p, Pair::P12, "dabit", n, ell);

  std::vector<Wire> a1, a2, a3;
  std::vector<GateTask<RingElem>> t1(n);
  for (std::size_t i = 0; i < n; ++i) {
    a1.push_back(seeded_bit(me, PartyId::P1, -r1[i], zero));
    a2.push_back(seeded_bit(me, PartyId::P2, -r2[i], zero));
    a3.push_back(public_to_12(me, r3[i], zero));
    t1[i] = {{a1[i]}, {a2[i]}};
  }
  auto q = base_gates(p, ell, t1);
  std::vector<Wire> rp(n);
  std::vector<GateTask<RingElem>> t2(n);
  for (std::size_t i = 0; i < n; ++i) {
    rp[i] = a1[i] + a2[i] - scale(q[i], two);
    t2[i] = {{rp[i]}, {a3[i]}};
  }
  auto q2 = base_gates(p, ell, t2);

  std::vector<DaBit> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].arith = rp[i] + a3[i] - scale(q2[i], two);
    const RingElem b1(r1[i].value(), 1), b2(r2[i].value(), 1), b3(r3[i].value(), 1);
    switch (me) {
      case PartyId::P0: out[i].bit = {b1, b2}; break;
      case PartyId::P1: out[i].bit = {b3, b1}; break;
      case PartyId::P2: out[i].bit = {b3, b2}; break;
    }
  }
  return out;
}

std::vector<EdaBit> edabits_gen(Party& p, unsigned ell, std::size_t n) {
  const PartyId me = p.id();
  const RingElem zero(0, ell), two(2, ell);
  const std::size_t total = n * ell;
  auto b1 = draw_bits(p, Pair::P01, "eda", total, ell);
  auto b2 = draw_bits(p, Pair::P02, "eda", total, ell);
  auto m = draw_bits(p, Pair::P12, "eda", total, ell);

  std::vector<Wire> a1(total), a2(total);
  std::vector<GateTask<RingElem>> t1(total);
  for (std::size_t k = 0; k < total; ++k) {
    a1[k] = seeded_bit(me, PartyId::P1, -b1[k], zero);
    a2[k] = seeded_bit(me, PartyId::P2, -b2[k], zero);
    t1[k] = {{a1[k]}, {a2[k]}};
  }
  auto prod = base_gates(p, ell, t1);

  std::vector<Wire> rp(total);
  std::vector<GateTask<RingElem>> t2(n);
  for (std::size_t v = 0; v < n; ++v) {
    t2[v].x.reserve(ell);
    t2[v].y.reserve(ell);
    for (unsigned i = 0; i < ell; ++i) {
      const std::size_t k = v * ell + i;
      rp[k] = a1[k] + a2[k] - scale(prod[k], two);
      t2[v].x.push_back(scale(public_to_12(me, m[k], zero), RingElem(std::uint64_t{1} << i, ell)));
      t2[v].y.push_back(rp[k]);
    }
  }
  auto w = base_gates(p, ell, t2);

  std::vector<EdaBit> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    Wire acc = -scale(w[v], two);
    out[v].bits.reserve(ell);
    for (unsigned i = 0; i < ell; ++i) {
      const std::size_t k = v * ell + i;
      acc = acc + scale(public_to_12(me, m[k], zero) + rp[k], RingElem(std::uint64_t{1} << i, ell));
      const RingElem c1(b1[k].value(), 1), c2(b2[k].value(), 1), cm(m[k].value(), 1);
      switch (me) {
        case PartyId::P0: out[v].bits.push_back({c1, c2}); break;
        case PartyId::P1: out[v].bits.push_back({cm, c1}); break;
        case PartyId::P2: out[v].bits.push_back({cm, c2}); break;
      }
    }
    out[v].arith = acc;
  }
  return out;
}

namespace {

void check_widths(const std::vector<BitWires>& a, const std::vector<BitWires>& b) {
  if (a.size() != b.size()) throw UsageError("bit_add: operand count mismatch");
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a[v].size() != b[v].size() || a[v].empty()) throw UsageError("bit_add: width mismatch");
}

// Carries c_0..c_{L-1} by ripple: c_{i+1} = ((a_i ⊕ c_i) ∧ (b_i ⊕ c_i)) ⊕ c_i, one AND per bit.
std::vector<BitWires> ripple_carries(Evaluator& ev, const std::vector<BitWires>& a, const std::vector<BitWires>& b) {
  const std::size_t V = a.size(), L = a[0].size();
  std::vector<BitWires> c(V, BitWires(L));
  for (std::size_t v = 0; v < V; ++v) c[v][0] = ev.constant(1, 0);
  for (std::size_t i = 0; i + 1 < L; ++i) {
    std::vector<Wire> x(V), y(V);
    for (std::size_t v = 0; v < V; ++v) {
      x[v] = xor1(a[v][i], c[v][i]);
      y[v] = xor1(b[v][i], c[v][i]);
    }
    auto g = ev.mul(x, y);
    for (std::size_t v = 0; v < V; ++v) c[v][i + 1] = xor1(g[v], c[v][i]);
  }
  return c;
}

// Kogge-Stone prefix over (g, p) with generate = a∧b and propagate = a⊕b.
std::vector<BitWires> prefix_carries(Evaluator& ev, const std::vector<BitWires>& a, const std::vector<BitWires>& b) {
  const std::size_t V = a.size(), L = a[0].size();
  std::vector<BitWires> g(V, BitWires(L)), pr(V, BitWires(L));
  {
    std::vector<Wire> x, y;
    for (std::size_t v = 0; v < V; ++v)
      for (std::size_t i = 0; i < L; ++i) {
        x.push_back(a[v][i]);
        y.push_back(b[v][i]);
      }
    auto gg = ev.mul(x, y);
    for (std::size_t v = 0; v < V; ++v)
      for (std::size_t i = 0; i < L; ++i) {
        g[v][i] = gg[v * L + i];
        pr[v][i] = xor1(a[v][i], b[v][i]);
      }
  }
  for (std::size_t s = 1; s < L; s <<= 1) {
    std::vector<Wire> x, y;
    for (std::size_t v = 0; v < V; ++v)
      for (std::size_t i = s; i < L; ++i) {
        x.push_back(pr[v][i]);
        y.push_back(g[v][i - s]);
        if (i >= 2 * s) {  // propagate of spans reaching below bit 0 stays unused
          x.push_back(pr[v][i]);
          y.push_back(pr[v][i - s]);
        }
      }
    auto r = ev.mul(x, y);
    std::size_t k = 0;
    for (std::size_t v = 0; v < V; ++v) {
      BitWires ng = g[v], np = pr[v];
      for (std::size_t i = s; i < L; ++i) {
        ng[i] = xor1(g[v][i], r[k++]);
        if (i >= 2 * s) np[i] = r[k++];
      }
      g[v] = std::move(ng);
      pr[v] = std::move(np);
    }
  }
  std::vector<BitWires> c(V, BitWires(L));
  for (std::size_t v = 0; v < V; ++v) {
    c[v][0] = ev.constant(1, 0);
    for (std::size_t i = 1; i < L; ++i) c[v][i] = g[v][i - 1];
  }
  return c;
}

std::vector<BitWires> carries(Evaluator& ev, const std::vector<BitWires>& a, const std::vector<BitWires>& b) {
  return ev.adder == AdderKind::Prefix ? prefix_carries(ev, a, b) : ripple_carries(ev, a, b);
}

std::vector<BitWires> public_bits(Evaluator& ev, std::span<const RingElem> v) {
  std::vector<BitWires> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const unsigned L = v[k].width();
    out[k].reserve(L);
    for (unsigned i = 0; i < L; ++i) out[k].push_back(ev.constant(1, v[k].bit(i)));
  }
  return out;
}

}  // namespace

std::vector<BitWires> bit_add(Evaluator& ev, const std::vector<BitWires>& a, const std::vector<BitWires>& b) {
  check_widths(a, b);
  if (a.empty()) return {};
  auto c = carries(ev, a, b);
  std::vector<BitWires> s(a.size());
  for (std::size_t v = 0; v < a.size(); ++v)
    for (std::size_t i = 0; i < a[v].size(); ++i) s[v].push_back(xor1(xor1(a[v][i], b[v][i]), c[v][i]));
  return s;
}

std::vector<Wire> bit_add_msb(Evaluator& ev, const std::vector<BitWires>& a, const std::vector<BitWires>& b) {
  check_widths(a, b);
  if (a.empty()) return {};
  auto c = carries(ev, a, b);
  std::vector<Wire> out;
  for (std::size_t v = 0; v < a.size(); ++v) {
    const std::size_t t = a[v].size() - 1;
    out.push_back(xor1(xor1(a[v][t], b[v][t]), c[v][t]));
  }
  return out;
}

namespace {

// Δ = x − r revealed against fresh edaBits; returns (public Δ bits, shared r bits).
std::pair<std::vector<BitWires>, std::vector<BitWires>> mask_and_open(Evaluator& ev, std::span<const Wire> x) {
  const unsigned ell = x[0].a.width();
  auto eda = ev.edabits(ell, x.size());
  std::vector<Wire> d(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) d[v] = x[v] - eda[v].arith;
  auto delta = ev.reveal(d);
  std::vector<BitWires> rb(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) rb[v] = std::move(eda[v].bits);
  return {public_bits(ev, delta), std::move(rb)};
}

}  // namespace

std::vector<BitWires> a2b(Evaluator& ev, std::span<const Wire> x) {
  if (x.empty()) return {};
  auto [db, rb] = mask_and_open(ev, x);
  return bit_add(ev, db, rb);
}

std::vector<Wire> msb(Evaluator& ev, std::span<const Wire> x) {
  if (x.empty()) return {};
  auto [db, rb] = mask_and_open(ev, x);
  return bit_add_msb(ev, db, rb);
}

std::vector<Wire> b2a(Evaluator& ev, std::span<const Wire> bits, unsigned ell) {
  if (bits.empty()) return {};
  auto da = ev.dabits(ell, bits.size());
  std::vector<Wire> d(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) d[i] = xor1(bits[i], da[i].bit);
  auto delta = ev.reveal(d);
  // Δ ⊕ r = Δ + r − 2Δr. The product goes through Π_mul so the output mask stays Δ-independent.
  std::vector<Wire> dw(bits.size()), r(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    dw[i] = ev.constant(ell, delta[i].value());
    r[i] = da[i].arith;
  }
  auto pr = ev.mul(dw, r);
  std::vector<Wire> out(bits.size());
  const RingElem two(2, ell);
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = dw[i] + r[i] - scale(pr[i], two);
  return out;
}

std::vector<Wire> drelu(Evaluator& ev, std::span<const Wire> x) {
  auto s = msb(ev, x);
  for (auto& w : s) w = add_const(ev.id(), w, RingElem(1, 1));
  return s;
}

std::vector<Wire> relu(Evaluator& ev, std::span<const Wire> x) {
  if (x.empty()) return {};
  auto d = drelu(ev, x);
  auto da = b2a(ev, d, x[0].a.width());
  return ev.mul(da, x);
}

std::vector<Wire> maxpool(Evaluator& ev, const std::vector<std::vector<Wire>>& groups) {
  std::vector<std::vector<Wire>> cur = groups;
  for (const auto& g : cur)
    if (g.empty()) throw UsageError("maxpool: empty window");
  for (;;) {
    std::vector<Wire> diff, base;
    for (const auto& g : cur)
      for (std::size_t i = 0; i + 1 < g.size(); i += 2) {
        diff.push_back(g[i] - g[i + 1]);
        base.push_back(g[i + 1]);
      }
    if (diff.empty()) break;
    auto r = relu(ev, diff);
    std::size_t k = 0;
    for (auto& g : cur) {
      std::vector<Wire> next;
      for (std::size_t i = 0; i + 1 < g.size(); i += 2, ++k) next.push_back(r[k] + base[k]);
      if (g.size() % 2) next.push_back(g.back());
      g = std::move(next);
    }
  }
  std::vector<Wire> out;
  for (const auto& g : cur) out.push_back(g[0]);
  return out;
}

}  // namespace ring3pc
