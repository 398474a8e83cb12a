#include "ring3pc/arith.hpp"

namespace ring3pc {

void log_gates(Party& p, unsigned ell, std::span<const GateTask<RingElem>> tasks, std::span<const Masked<RingElem>> z) {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& t = tasks[i];
    if (t.x.size() == 1)
      p.logs().add_mul(ell, {t.x[0], t.y[0], z[i], p.phase()});
    else
      p.logs().add_dot(ell, {t.x, t.y, z[i], p.phase()});
  }
}

std::vector<Masked<RingElem>> base_gates(Party& p, unsigned ell, std::span<const GateTask<RingElem>> tasks,
                                         const std::vector<std::optional<Additive<RingElem>>>* rz_override) {
  auto z = gates_direct(p, Zl(ell), tasks, {}, rz_override);
  log_gates(p, ell, tasks, z);
  return z;
}

namespace {

using M = Masked<RingElem>;

// ⟨b⟩ for a bit known to P0 and P_k (k = 1 for slot a, k = 2 for slot b). m = 0 and r = −b.
M seeded_bit(PartyId p, PartyId k, RingElem negb, RingElem zero) {
  if (p == PartyId::P0) return k == PartyId::P1 ? M{negb, zero} : M{zero, negb};
  if (p == k) return {zero, negb};
  return {zero, zero};
}

// ⟨r⟩ → [r]: P1 takes m − [ρ]_1, P2 takes −[ρ]_2, P0 uses the clear r.
Additive<RingElem> to_additive(PartyId p, const M& s, RingElem clear, RingElem zero) {
  switch (p) {
    case PartyId::P0: return {clear + s.b, -s.b};
    case PartyId::P1: return {s.a - s.b, zero};
    case PartyId::P2: return {-s.b, zero};
  }
  return {zero, zero};
}

}  // namespace

std::vector<TruncPair> trunc_pairs(Party& p, unsigned ell, unsigned t, std::size_t n) {
  if (t >= ell) throw UsageError("trunc: shift must be below the ring width");
  const Zl dom(ell);
  const RingElem zero = dom.zero();
  const PartyId me = p.id();
  std::vector<std::vector<RingElem>> b1(n, std::vector<RingElem>(ell, zero)), b2 = b1;
  if (holds(me, Pair::P01)) {
    Prg& g = p.stream(Pair::P01, "trunc");
    for (auto& v : b1)
      for (auto& b : v) b = dom.from(g.next_bit());
  }
  if (holds(me, Pair::P02)) {
    Prg& g = p.stream(Pair::P02, "trunc");
    for (auto& v : b2)
      for (auto& b : v) b = dom.from(g.next_bit());
  }

  // With c_j = b1_j·b2_j, the products enter r_x as −2Σ_j 2^j c_j and r_z as −2Σ_k 2^k c_{src(k)}.
  // Modulo 2^ell both are combinations of
  //   A = Σ_{j<t} 2^j c_j,   D = Σ_{t≤j<ell−1} 2^{j−t} c_j − 2^{ell−1−t} c_{ell−1}
  // namely r_x: −2A − 2^{t+1}D and r_z: −2D, so each pair costs ell product terms.
  std::vector<GateTask<RingElem>> tasks;
  tasks.reserve(2 * n);
  auto bit1 = [&](std::size_t i, unsigned j) { return seeded_bit(me, PartyId::P1, -b1[i][j], zero); };
  auto bit2 = [&](std::size_t i, unsigned j) { return seeded_bit(me, PartyId::P2, -b2[i][j], zero); };
  for (std::size_t i = 0; i < n; ++i) {
    GateTask<RingElem> a, d;
    for (unsigned j = 0; j < ell; ++j) {
      RingElem coef = j < t ? dom.from(std::uint64_t{1} << j)
                  : j + 1 < ell ? dom.from(std::uint64_t{1} << (j - t))
                                : -dom.from(std::uint64_t{1} << (ell - 1 - t));
      auto& task = j < t ? a : d;
      task.x.push_back(scale(bit1(i, j), coef));
      task.y.push_back(bit2(i, j));
    }
    tasks.push_back(std::move(a));
    tasks.push_back(std::move(d));
  }
  auto dots = base_gates(p, ell, tasks);

  std::vector<TruncPair> out;
  out.reserve(n);
  const RingElem two = dom.from(2);
  for (std::size_t i = 0; i < n; ++i) {
    M sx = -scale(dots[2 * i], two) - scale(dots[2 * i + 1], dom.from(2).shl(t)), sz = -scale(dots[2 * i + 1], two);
    RingElem cx = zero, cz = zero;
    for (unsigned j = 0; j < ell; ++j) {
      const RingElem pw = dom.from(std::uint64_t{1} << j);
      const unsigned src = trunc_source_bit(j, t, ell);
      sx = sx + scale(bit1(i, j) + bit2(i, j), pw);
      sz = sz + scale(bit1(i, src) + bit2(i, src), pw);
      if (me == PartyId::P0) {
        cx += pw * dom.from(b1[i][j].value() ^ b2[i][j].value());
        cz += pw * dom.from(b1[i][src].value() ^ b2[i][src].value());
      }
    }
    if (me == PartyId::P0 && !(cz == cx.ashr(t))) throw HarnessError("trunc pair: r_z differs from ashr(r_x, t)");
    out.push_back({to_additive(me, sx, cx, zero), to_additive(me, sz, cz, zero), t});
  }
  return out;
}

}  // namespace ring3pc
