#include "ring3pc/galois.hpp"

#if defined(__PCLMUL__)
#include <immintrin.h>
#endif

#include <map>
#include <memory>
#include <mutex>

#include "ring3pc/errors.hpp"

namespace ring3pc {

namespace {

using u128 = unsigned __int128;

int deg(u128 p) {
  if (p == 0) return -1;
  std::uint64_t hi = static_cast<std::uint64_t>(p >> 64);
  if (hi) return 127 - __builtin_clzll(hi);
  return 63 - __builtin_clzll(static_cast<std::uint64_t>(p));
}

u128 pmod(u128 a, u128 m) {
  int dm = deg(m);
  for (int da = deg(a); da >= dm; da = deg(a)) a ^= m << (da - dm);
  return a;
}

u128 pmulmod(u128 a, u128 b, u128 f, int d) {
  u128 r = 0;
  for (int i = deg(b); i >= 0; --i) {
    r <<= 1;
    if ((r >> d) & 1) r ^= f;
    if ((b >> i) & 1) r ^= a;
  }
  return r;
}

u128 pgcd(u128 a, u128 b) {
  while (b != 0) {
    a = pmod(a, b);
    std::swap(a, b);
  }
  return a;
}

u128 to_poly(const std::vector<std::uint8_t>& bits) {
  if (bits.size() < 2 || bits.size() > 65) throw ConfigError("modulus degree must be in 1..64");
  u128 f = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw ConfigError("modulus coefficients must be binary");
    if (bits[i]) f |= u128{1} << i;
  }
  return f;
}

}  // namespace

bool gf2_irreducible(const std::vector<std::uint8_t>& f_bits) {
  u128 f = to_poly(f_bits);
  int d = deg(f);
  if (d < 1) return false;
  auto x_pow_2k = [&](int k) {
    u128 s = pmod(u128{2}, f);
    for (int i = 0; i < k; ++i) s = pmulmod(s, s, f, d);
    return s;
  };
  if (x_pow_2k(d) != pmod(u128{2}, f)) return false;
  int n = d;
  for (int q = 2; q <= n; ++q) {
    if (n % q) continue;
    while (n % q == 0) n /= q;
    u128 g = x_pow_2k(d / q) ^ pmod(u128{2}, f);
    if (deg(pgcd(f, g)) != 0) return false;
  }
  return true;
}

bool gf2_irreducible_by_trial_division(const std::vector<std::uint8_t>& f_bits) {
  u128 f = to_poly(f_bits);
  int d = deg(f);
  if (d < 1) return false;
  if (d > 32) throw UsageError("trial division is limited to degree <= 32");
  for (int k = 1; 2 * k <= d; ++k)
    for (std::uint64_t low = 0; low < (std::uint64_t{1} << k); ++low)
      if (pmod(f, (u128{1} << k) | low) == 0) return false;
  return true;
}

GrModulus::GrModulus(std::vector<std::uint8_t> f_bits) : bits_(std::move(f_bits)) {
  if (bits_.size() < 2 || bits_.back() != 1) throw ConfigError("modulus must be monic of degree >= 1");
  if (!gf2_irreducible(bits_)) throw ConfigError("modulus is reducible over GF(2)");
}

const std::vector<unsigned>& GrModulus::supported_degrees() {
  static const std::vector<unsigned> ds{1, 2, 4, 8, 16, 32, 64};
  return ds;
}

GrModulus GrModulus::for_degree(unsigned d) {
  std::vector<unsigned> terms;
  switch (d) {
    case 1: terms = {0}; break;
    case 2: terms = {1, 0}; break;
    case 4: terms = {1, 0}; break;
    case 8: terms = {4, 3, 1, 0}; break;
    case 16: terms = {5, 3, 1, 0}; break;
    case 32: terms = {7, 3, 2, 0}; break;
    case 64: terms = {4, 3, 1, 0}; break;
    default: throw ConfigError("unsupported extension degree d=" + std::to_string(d));
  }
  std::vector<std::uint8_t> bits(d + 1, 0);
  bits[d] = 1;
  for (unsigned t : terms) bits[t] = 1;
  return GrModulus(std::move(bits));
}

GrRing::GrRing(unsigned ell, GrModulus f) : ell_(ell), d_(f.degree()), mask_(width_mask(ell)), f_(std::move(f)) {
  if (ell < 1 || ell > 64) throw ConfigError("ring width must be in 1..64");
  for (unsigned t = 0; t < d_; ++t)
    if (f_.bits()[t]) low_terms_.push_back(t);
}

const GrRing& GrRing::get(unsigned ell, const GrModulus& f) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, std::vector<std::uint8_t>>, std::unique_ptr<GrRing>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{ell, f.bits()}];
  if (!slot) slot = std::make_unique<GrRing>(ell, f);
  return *slot;
}

const GrRing& GrRing::get(unsigned ell, unsigned d) { return get(ell, GrModulus::for_degree(d)); }

namespace {

// Carry-less product of two 64-bit polynomials over GF(2).
void clmul64(std::uint64_t a, std::uint64_t b, std::uint64_t& lo, std::uint64_t& hi) {
#if defined(__PCLMUL__)
  const __m128i p = _mm_clmulepi64_si128(_mm_set_epi64x(0, static_cast<long long>(a)), _mm_set_epi64x(0, static_cast<long long>(b)), 0);
  lo = static_cast<std::uint64_t>(_mm_cvtsi128_si64(p));
  hi = static_cast<std::uint64_t>(_mm_extract_epi64(p, 1));
#else
  lo = hi = 0;
  for (unsigned i = 0; i < 64; ++i)
    if ((b >> i) & 1) {
      lo ^= a << i;
      if (i) hi ^= a >> (64 - i);
    }
#endif
}

}  // namespace

void GrRing::mul_wide_acc(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* t) const {
  if (ell_ == 1) {
    // GF(2^d): pack the coefficient bits and add the carry-less product's bits (mod 2).
    std::uint64_t pa = 0, pb = 0;
    for (unsigned i = 0; i < d_; ++i) {
      pa |= (a[i] & 1) << i;
      pb |= (b[i] & 1) << i;
    }
    std::uint64_t lo, hi;
    clmul64(pa, pb, lo, hi);
    for (unsigned k = 0; k < 64 && k < 2 * d_ - 1; ++k) t[k] += (lo >> k) & 1;
    for (unsigned k = 64; k < 2 * d_ - 1; ++k) t[k] += (hi >> (k - 64)) & 1;
    return;
  }
  unsigned na = 0, nb = 0;
  for (unsigned i = 0; i < d_; ++i) {
    na += a[i] != 0;
    nb += b[i] != 0;
  }
  if (na > nb) std::swap(a, b);
  for (unsigned i = 0; i < d_; ++i) {
    const std::uint64_t ai = a[i];
    if (!ai) continue;
    std::uint64_t* ti = t + i;
    for (unsigned j = 0; j < d_; ++j) ti[j] += ai * b[j];
  }
}

void GrRing::reduce_wide(std::uint64_t* t, std::uint64_t* out) const {
  for (unsigned k = 2 * d_ - 2; k >= d_; --k) {
    const std::uint64_t c = t[k];
    if (!c) continue;
    for (unsigned s : low_terms_) t[k - d_ + s] -= c;
  }
  for (unsigned i = 0; i < d_; ++i) out[i] = t[i] & mask_;
}

void GrRing::mul(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) const {
  std::uint64_t t[128] = {};
  mul_wide_acc(a, b, t);
  reduce_wide(t, out);
}

void GrRing::mul_acc(const std::uint64_t* a, const std::uint64_t* b, std::uint64_t* out) const {
  std::uint64_t p[64];
  mul(a, b, p);
  for (unsigned i = 0; i < d_; ++i) out[i] = (out[i] + p[i]) & mask_;
}

void GrRing::mul_by_x(const std::uint64_t* a, std::uint64_t* out) const {
  std::uint64_t top = a[d_ - 1];
  for (unsigned i = d_ - 1; i > 0; --i) out[i] = a[i - 1];
  out[0] = 0;
  for (unsigned s : low_terms_) out[s] = (out[s] - top) & mask_;
}

GrElem::GrElem(const GrRing& ring, std::vector<std::uint64_t> coeffs) : ring_(&ring), c_(std::move(coeffs)) {
  if (c_.size() != ring.d()) throw UsageError("coefficient count must equal d");
  for (auto& v : c_) v &= ring.mask();
}

GrElem GrElem::embed(const GrRing& ring, RingElem v) {
  if (v.width() != ring.ell()) throw UsageError("embed: width does not match the Galois ring");
  return embed(ring, v.value());
}

GrElem GrElem::embed(const GrRing& ring, std::uint64_t v) {
  GrElem e(ring);
  e.c_[0] = v & ring.mask();
  return e;
}

GrElem GrElem::x(const GrRing& ring) {
  GrElem one = embed(ring, 1);
  GrElem r(ring);
  ring.mul_by_x(one.c_.data(), r.c_.data());
  return r;
}

bool GrElem::is_zero() const {
  for (auto v : c_)
    if (v) return false;
  return true;
}

bool GrElem::is_unit() const {
  for (auto v : c_)
    if (v & 1) return true;
  return false;
}

void GrElem::check(const GrElem& o) const {
  if (ring_ == nullptr || ring_ != o.ring_) throw UsageError("Galois ring mismatch");
}

GrElem& GrElem::operator+=(const GrElem& o) {
  check(o);
  for (unsigned i = 0; i < c_.size(); ++i) c_[i] = (c_[i] + o.c_[i]) & ring_->mask();
  return *this;
}

GrElem& GrElem::operator-=(const GrElem& o) {
  check(o);
  for (unsigned i = 0; i < c_.size(); ++i) c_[i] = (c_[i] - o.c_[i]) & ring_->mask();
  return *this;
}

GrElem& GrElem::operator*=(const GrElem& o) {
  check(o);
  ring_->mul(c_.data(), o.c_.data(), c_.data());
  return *this;
}

GrElem operator+(const GrElem& a, const GrElem& b) {
  GrElem r = a;
  return r += b;
}
GrElem operator-(const GrElem& a, const GrElem& b) {
  GrElem r = a;
  return r -= b;
}
GrElem operator*(const GrElem& a, const GrElem& b) {
  a.check(b);
  GrElem r(*a.ring_);
  a.ring_->mul(a.c_.data(), b.c_.data(), r.c_.data());
  return r;
}
GrElem operator-(const GrElem& a) {
  GrElem r = a;
  for (auto& v : r.c_) v = (0 - v) & a.ring_->mask();
  return r;
}
bool operator==(const GrElem& a, const GrElem& b) { return a.ring_ == b.ring_ && a.c_ == b.c_; }

GrElem GrElem::scaled(std::uint64_t s) const {
  GrElem r = *this;
  for (auto& v : r.c_) v = (v * s) & ring_->mask();
  return r;
}

GrFixedMul::GrFixedMul(const GrElem& z) : ring_(&z.ring()), z_(z), cols_(std::size_t{z.degree()} * z.degree()) {
  const unsigned d = ring_->d();
  std::copy(z.coeffs().begin(), z.coeffs().end(), cols_.begin());
  for (unsigned j = 1; j < d; ++j) ring_->mul_by_x(&cols_[(j - 1) * d], &cols_[j * d]);
}

void GrFixedMul::apply(const std::uint64_t* a, std::uint64_t* out) const {
  const unsigned d = ring_->d();
  if (ring_->ell() == 1) {
    ring_->mul(z_.coeffs().data(), a, out);
    return;
  }
  std::uint64_t acc[64] = {};
  unsigned j = 0;
  // Four columns per pass keep the accumulator traffic down.
  for (; j + 4 <= d; j += 4) {
    const std::uint64_t a0 = a[j], a1 = a[j + 1], a2 = a[j + 2], a3 = a[j + 3];
    if (!(a0 | a1 | a2 | a3)) continue;
    const std::uint64_t* c = &cols_[std::size_t{j} * d];
    for (unsigned i = 0; i < d; ++i) acc[i] += a0 * c[i] + a1 * c[i + d] + a2 * c[i + 2 * d] + a3 * c[i + 3 * d];
  }
  for (; j < d; ++j) {
    const std::uint64_t* c = &cols_[std::size_t{j} * d];
    for (unsigned i = 0; i < d; ++i) acc[i] += a[j] * c[i];
  }
  for (unsigned i = 0; i < d; ++i) out[i] = acc[i] & ring_->mask();
}

void put_elem(Bytes& out, const GrElem& e) {
  for (auto v : e.coeffs()) put_word(out, v, e.ring().ell());
}

GrElem get_elem(ByteReader& in, const GrRing& ring) {
  std::vector<std::uint64_t> c(ring.d());
  for (auto& v : c) v = in.word(ring.ell());
  return GrElem(ring, std::move(c));
}

GrElem inverse(const GrElem& a) {
  if (!a.is_unit()) throw UsageError("element is not a unit");
  const GrRing& ring = a.ring();
  const GrRing& res = GrRing::get(1, ring.modulus());
  // Inverse in the residue field GF(2^d) is a^(2^d - 2).
  std::vector<std::uint64_t> low(ring.d());
  for (unsigned i = 0; i < ring.d(); ++i) low[i] = a.coeff(i) & 1;
  GrElem base(res, low), acc = GrElem::embed(res, 1);
  std::uint64_t e = ring.d() >= 64 ? ~std::uint64_t{1} : (std::uint64_t{1} << ring.d()) - 2;
  for (; e; e >>= 1) {
    if (e & 1) acc *= base;
    base *= base;
  }
  // Hensel lift: b <- b(2 - ab) doubles the number of correct low bits.
  std::vector<std::uint64_t> c(acc.coeffs().begin(), acc.coeffs().end());
  GrElem b(ring, c), two = GrElem::embed(ring, 2);
  for (unsigned bits = 1; bits < ring.ell(); bits *= 2) b = b * (two - a * b);
  if (!(a * b == GrElem::embed(ring, 1))) throw UsageError("inverse failed to converge");
  return b;
}

GrElem line_eval(const GrElem& p0, const GrElem& p1, const GrElem& zeta) {
  return p0 + zeta * (p1 - p0);
}

GrElem quad_eval(const GrElem& h0, const GrElem& h1, const GrElem& h2, const GrElem& zeta_even) {
  const GrRing& ring = zeta_even.ring();
  std::vector<std::uint64_t> half(ring.d());
  for (unsigned i = 0; i < ring.d(); ++i) {
    if (zeta_even.coeff(i) & 1) throw UsageError("quad_eval needs an even evaluation point");
    half[i] = zeta_even.coeff(i) >> 1;
  }
  GrElem zp(ring, std::move(half));
  GrElem one = GrElem::embed(ring, 1), two = GrElem::embed(ring, 2);
  // (ζ−1)(ζ−2)/2 = (ζ−1)(ζ'−1);  ζ(2−ζ) ;  ζ(ζ−1)/2 = ζ'(ζ−1)
  GrElem c0 = (zeta_even - one) * (zp - one);
  GrElem c1 = zeta_even * (two - zeta_even);
  GrElem c2 = zp * (zeta_even - one);
  return c0 * h0 + c1 * h1 + c2 * h2;
}

UnitPointBasis::UnitPointBasis(const GrRing& ring) {
  if (ring.d() < 2) throw UsageError("unit-point interpolation needs d >= 2");
  GrElem one = GrElem::embed(ring, 1);
  omega_ = GrElem::x(ring);
  inv_omega_ = inverse(omega_);
  inv_one_minus_omega_ = inverse(one - omega_);
  inv_omega_omega_minus_one_ = inverse(omega_ * (omega_ - one));
}

std::array<GrElem, 3> UnitPointBasis::weights(const GrElem& zeta) const {
  GrElem one = GrElem::embed(zeta.ring(), 1);
  GrElem zm1 = zeta - one, zmw = zeta - omega_;
  // L_0 = (ζ−1)(ζ−ω)/((0−1)(0−ω)) = (ζ−1)(ζ−ω)/ω
  return {zm1 * zmw * inv_omega_, zeta * zmw * inv_one_minus_omega_, zeta * zm1 * inv_omega_omega_minus_one_};
}

GrElem UnitPointBasis::eval(const GrElem& h0, const GrElem& h1, const GrElem& hw, const GrElem& zeta) const {
  auto w = weights(zeta);
  return w[0] * h0 + w[1] * h1 + w[2] * hw;
}

}  // namespace ring3pc
