#pragma once

#include <vector>

#include "ring3pc/transport.hpp"

namespace ring3pc {

/// Party-local view of ⟨x⟩ = ([r], m) with m = x + r and r = [r]_1 + [r]_2.
///   P0: a = [r]_1, b = [r]_2
///   P1: a = m,     b = [r]_1
///   P2: a = m,     b = [r]_2
template <class E>
struct Masked {
  E a;
  E b;
};

/// Party-local view of [x] = ([x]_1, [x]_2).
///   P0: a = [x]_1, b = [x]_2
///   P1: a = [x]_1, b = 0
///   P2: a = [x]_2, b = 0
template <class E>
struct Additive {
  E a;
  E b;
};

template <class E>
Masked<E> operator+(const Masked<E>& x, const Masked<E>& y) {
  return {x.a + y.a, x.b + y.b};
}
template <class E>
Masked<E> operator-(const Masked<E>& x, const Masked<E>& y) {
  return {x.a - y.a, x.b - y.b};
}
template <class E>
Masked<E> operator-(const Masked<E>& x) {
  return {-x.a, -x.b};
}
template <class E, class S>
Masked<E> scale(const Masked<E>& x, const S& c) {
  return {x.a * c, x.b * c};
}
/// x + c for a public c: only m moves.
template <class E>
Masked<E> add_const(PartyId p, const Masked<E>& x, const E& c) {
  if (p == PartyId::P0) return x;
  return {x.a + c, x.b};
}

template <class E>
Additive<E> operator+(const Additive<E>& x, const Additive<E>& y) {
  return {x.a + y.a, x.b + y.b};
}
template <class E>
Additive<E> operator-(const Additive<E>& x) {
  return {-x.a, -x.b};
}
template <class E, class S>
Additive<E> scale(const Additive<E>& x, const S& c) {
  return {x.a * c, x.b * c};
}

/// ⟨x⟩ from its mask sharing [r] and the masked value m (m ignored at P0).
template <class E>
Masked<E> from_mask(PartyId p, const Additive<E>& r, const E& m) {
  if (p == PartyId::P0) return {r.a, r.b};
  return {m, r.a};
}

/// The mask sharing [r] inside ⟨x⟩.
template <class E>
Additive<E> mask_of(PartyId p, const Masked<E>& x, const E& zero) {
  if (p == PartyId::P0) return {x.a, x.b};
  return {x.b, zero};
}

/// Public constant c as ⟨c⟩ = ([0], c).
template <class E>
Masked<E> public_share(PartyId p, const E& c, const E& zero) {
  if (p == PartyId::P0) return {zero, zero};
  return {c, zero};
}

}  // namespace ring3pc
