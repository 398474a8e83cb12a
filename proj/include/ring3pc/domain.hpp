#pragma once

#include <string>

#include "ring3pc/galois.hpp"
#include "ring3pc/prg.hpp"
#include "ring3pc/ring.hpp"

namespace ring3pc {

/// Z_{2^ell} as a protocol domain.
struct Zl {
  using Elem = RingElem;
  unsigned ell;

  explicit Zl(unsigned l) : ell(l) {
    if (l < 1 || l > 64) throw ConfigError("ring width must be in 1..64");
  }
  Elem zero() const { return {0, ell}; }
  Elem from(std::uint64_t v) const { return {v, ell}; }
  Elem draw(Prg& g) const { return {ell == 1 ? std::uint64_t{g.next_bit()} : g.next_u64(), ell}; }
  unsigned word_width() const { return ell; }
  std::size_t elem_bytes() const { return wire_bytes(ell); }
  void put(Bytes& out, const Elem& e) const { put_word(out, e.value(), ell); }
  Elem get(ByteReader& in) const { return {in.word(ell), ell}; }
  std::string tag() const { return std::to_string(ell); }
};

/// GR(2^ell, d) as a protocol domain.
struct GrD {
  using Elem = GrElem;
  const GrRing* ring;

  explicit GrD(const GrRing& r) : ring(&r) {}
  Elem zero() const { return GrElem(*ring); }
  Elem from(std::uint64_t v) const { return GrElem::embed(*ring, v); }
  Elem draw(Prg& g) const {
    std::vector<std::uint64_t> c(ring->d());
    for (auto& v : c) v = ring->ell() == 1 ? std::uint64_t{g.next_bit()} : g.next_u64();
    return GrElem(*ring, std::move(c));
  }
  unsigned word_width() const { return ring->ell(); }
  std::size_t elem_bytes() const { return ring->elem_bytes(); }
  void put(Bytes& out, const Elem& e) const { put_elem(out, e); }
  Elem get(ByteReader& in) const { return get_elem(in, *ring); }
  std::string tag() const { return std::to_string(ring->ell()) + "[x]" + std::to_string(ring->d()); }
};

}  // namespace ring3pc
