#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ring3pc/sharing.hpp"

namespace ring3pc {

/// One multiplication (x and y of length 1) or inner product Σ x_i·y_i.
template <class E>
struct GateTask {
  std::vector<Masked<E>> x, y;
};

/// P0's full mask r = [r]_1 + [r]_2.
template <class E>
E full_mask(const Masked<E>& s) {
  return s.a + s.b;
}

/// Γ = Σ r_x·r_y + r_z, computed by P0.
template <class E>
E gate_gamma(const GateTask<E>& t, const Additive<E>& rz) {
  if (t.x.size() != t.y.size()) throw UsageError("dot: length mismatch");
  E g = rz.a + rz.b;
  for (std::size_t i = 0; i < t.x.size(); ++i) g += full_mask(t.x[i]) * full_mask(t.y[i]);
  return g;
}

/// Party j's additive share of m_z:
///   P1: −Σ(m_x[r_y]_1 + m_y[r_x]_1) + [Γ]_1
///   P2: Σ(m_x m_y − m_x[r_y]_2 − m_y[r_x]_2) + [Γ]_2
template <class E>
E gate_mz_share(PartyId p, const GateTask<E>& t, const E& gamma_share) {
  if (t.x.size() != t.y.size()) throw UsageError("dot: length mismatch");
  E s = gamma_share;
  const bool p2 = p == PartyId::P2;
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    const auto& x = t.x[i];
    const auto& y = t.y[i];
    if (p2) s += x.a * y.a;
    s -= x.a * y.b + y.a * x.b;
  }
  return s;
}

struct GateHooks {
  std::string gamma = "gamma";
  std::string mz = "mz";
};

/// Π_mul / Π_dot executed back to back in the current phase: P0 deals every Γ in one
/// message (barrier "deal"), then P1 and P2 exchange m_z shares (barrier "exchange").
/// `rz_override[i]` replaces the fresh r_z mask of task i when present.
template <class D, class E = typename D::Elem>
std::vector<Masked<E>> gates_direct(Party& p, const D& dom, std::span<const GateTask<E>> tasks, const GateHooks& hooks = {},
                                    const std::vector<std::optional<Additive<E>>>* rz_override = nullptr) {
  const std::size_t n = tasks.size();
  std::size_t fresh = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!rz_override || !(*rz_override)[i]) ++fresh;
  auto drawn = sha_random(p, dom, fresh);
  std::vector<Additive<E>> rz;
  rz.reserve(n);
  for (std::size_t i = 0, k = 0; i < n; ++i)
    rz.push_back(rz_override && (*rz_override)[i] ? *(*rz_override)[i] : drawn[k++]);

  std::vector<E> gamma;
  if (p.is(PartyId::P0)) {
    gamma.reserve(n);
    for (std::size_t i = 0; i < n; ++i) gamma.push_back(gate_gamma(tasks[i], rz[i]));
  }
  auto g = sha_input(p, dom, std::span<const E>(gamma), n, hooks.gamma);

  std::vector<E> s;
  if (!p.is(PartyId::P0)) {
    s.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.push_back(gate_mz_share(p.id(), tasks[i], g[i].a));
  }
  auto mz = exchange_mz(p, dom, s, hooks.mz);
  std::vector<Masked<E>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(from_mask(p.id(), rz[i], p.is(PartyId::P0) ? dom.zero() : mz[i]));
  return out;
}

/// Z_{2^ell} gates run directly and appended to the gate log with the current phase.
std::vector<Masked<RingElem>> base_gates(Party& p, unsigned ell, std::span<const GateTask<RingElem>> tasks,
                                         const std::vector<std::optional<Additive<RingElem>>>* rz_override = nullptr);

void log_gates(Party& p, unsigned ell, std::span<const GateTask<RingElem>> tasks, std::span<const Masked<RingElem>> z);

/// Masks for one truncation: r_z = ashr(r_x, t); shares are additive, P0 knows both values.
struct TruncPair {
  Additive<RingElem> rx, rz;
  unsigned t;
};

/// Generates n pairs in the current phase with two logged inner products of ell terms in total.
std::vector<TruncPair> trunc_pairs(Party& p, unsigned ell, unsigned t, std::size_t n);

/// The bit index feeding position j of ashr(r, t): j + t below ell − t, the sign bit above.
constexpr unsigned trunc_source_bit(unsigned j, unsigned t, unsigned ell) { return j + t < ell ? j + t : ell - 1; }

}  // namespace ring3pc
