#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ring3pc/ring.hpp"

namespace ring3pc {

/// Monic degree-d polynomial with binary coefficients, irreducible over GF(2).
/// bits()[i] is the coefficient of x^i; bits()[d] == 1.
class GrModulus {
 public:
  /// Throws ConfigError unless f is monic of degree >= 1 and irreducible over GF(2).
  explicit GrModulus(std::vector<std::uint8_t> f_bits);

  /// Fixed table: 1 -> x+1, 2 -> x^2+x+1, 4 -> x^4+x+1, 8 -> x^8+x^4+x^3+x+1,
  /// 16 -> x^16+x^5+x^3+x+1, 32 -> x^32+x^7+x^3+x^2+1, 64 -> x^64+x^4+x^3+x+1.
  static GrModulus for_degree(unsigned d);
  static const std::vector<unsigned>& supported_degrees();

  unsigned degree() const { return static_cast<unsigned>(bits_.size() - 1); }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  bool operator==(const GrModulus& o) const { return bits_ == o.bits_; }

 private:
  std::vector<std::uint8_t> bits_;
};

/// Rabin's test. Decides irreducibility exactly for degree <= 64.
bool gf2_irreducible(const std::vector<std::uint8_t>& f_bits);
/// Trial division by every polynomial of degree <= d/2. Only practical for small d.
bool gf2_irreducible_by_trial_division(const std::vector<std::uint8_t>& f_bits);

/// GR(2^ell, d) = Z_{2^ell}[x]/f(x). Instances are interned; compare by address.
class GrRing {
 public:
  static const GrRing& get(unsigned ell, unsigned d);
  static const GrRing& get(unsigned ell, const GrModulus& f);

  unsigned ell() const { return ell_; }
  unsigned d() const { return d_; }
  std::uint64_t mask() const { return mask_; }
  const GrModulus& modulus() const { return f_; }
  std::size_t elem_bytes() const { return d_ * wire_bytes(ell_); }

  // Raw kernels over length-d coefficient arrays. out may alias inputs.
  void mul(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) const;
  /// out += a*b
  void mul_acc(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) const;
  /// out = x·a
  void mul_by_x(const std::uint64_t* a, std::uint64_t* out) const;
  /// wide[0..2d−1) += a·b without reduction; wide must hold 2d words.
  void mul_wide_acc(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* wide) const;
  /// out = wide mod (f, 2^ell); wide is clobbered.
  void reduce_wide(std::uint64_t* wide, std::uint64_t* out) const;

  GrRing(const GrRing&) = delete;
  GrRing& operator=(const GrRing&) = delete;
  GrRing(unsigned ell, GrModulus f);

 private:
  unsigned ell_;
  unsigned d_;
  std::uint64_t mask_;
  GrModulus f_;
  std::vector<unsigned> low_terms_;  // t < d with f_t = 1
};

class GrElem {
 public:
  GrElem() = default;
  explicit GrElem(const GrRing& ring) : ring_(&ring), c_(ring.d(), 0) {}
  GrElem(const GrRing& ring, std::vector<std::uint64_t> coeffs);

  static GrElem embed(const GrRing& ring, RingElem v);
  static GrElem embed(const GrRing& ring, std::uint64_t v);
  /// The element x of the residue-polynomial basis.
  static GrElem x(const GrRing& ring);

  const GrRing& ring() const { return *ring_; }
  bool valid() const { return ring_ != nullptr; }
  unsigned degree() const { return ring_->d(); }
  std::span<const std::uint64_t> coeffs() const { return c_; }
  std::span<std::uint64_t> coeffs_mut() { return c_; }
  std::uint64_t coeff(unsigned i) const { return c_.at(i); }
  bool is_zero() const;
  /// True iff the reduction mod 2 is nonzero, i.e. the element is invertible.
  bool is_unit() const;

  friend GrElem operator+(const GrElem& a, const GrElem& b);
  friend GrElem operator-(const GrElem& a, const GrElem& b);
  friend GrElem operator*(const GrElem& a, const GrElem& b);
  friend GrElem operator-(const GrElem& a);
  GrElem& operator+=(const GrElem& o);
  GrElem& operator-=(const GrElem& o);
  GrElem& operator*=(const GrElem& o);
  friend bool operator==(const GrElem& a, const GrElem& b);

  /// Multiplication by a base-ring scalar, coefficient-wise.
  GrElem scaled(std::uint64_t s) const;

 private:
  void check(const GrElem& o) const;
  const GrRing* ring_ = nullptr;
  std::vector<std::uint64_t> c_;
};

/// Multiplication by a fixed element through its precomputed d×d matrix (column j = z·x^j),
/// which skips the wide product's reduction. For many products with one operand.
class GrFixedMul {
 public:
  explicit GrFixedMul(const GrElem& z);
  /// out = z·a; out may alias a.
  void apply(const std::uint64_t* a, std::uint64_t* out) const;

 private:
  const GrRing* ring_;
  GrElem z_;
  std::vector<std::uint64_t> cols_;
};

void put_elem(Bytes& out, const GrElem& e);
GrElem get_elem(ByteReader& in, const GrRing& ring);

/// Multiplicative inverse of a unit; UsageError otherwise.
GrElem inverse(const GrElem& a);

/// ζ·p1 − (ζ−1)·p0: the line through (0,p0), (1,p1) evaluated at ζ.
GrElem line_eval(const GrElem& p0, const GrElem& p1, const GrElem& zeta);

/// Quadratic through (0,h0), (1,h1), (2,h2) evaluated at an even point ζ_even = 2ζ'.
/// The halved Lagrange numerators are formed from ζ' = ζ_even >> 1 coefficient-wise;
/// UsageError if any coefficient of ζ_even is odd.
GrElem quad_eval(const GrElem& h0, const GrElem& h1, const GrElem& h2, const GrElem& zeta_even);

/// Lagrange basis for the points {0, 1, ω} with ω = x. ω and ω−1 are units for d >= 2,
/// so every denominator is invertible.
class UnitPointBasis {
 public:
  explicit UnitPointBasis(const GrRing& ring);
  const GrElem& omega() const { return omega_; }
  /// (L_0(ζ), L_1(ζ), L_ω(ζ))
  std::array<GrElem, 3> weights(const GrElem& zeta) const;
  /// Quadratic through (0,h0), (1,h1), (ω,hw) evaluated at ζ.
  GrElem eval(const GrElem& h0, const GrElem& h1, const GrElem& hw, const GrElem& zeta) const;

 private:
  GrElem omega_, inv_omega_, inv_one_minus_omega_, inv_omega_omega_minus_one_;
};

}  // namespace ring3pc
