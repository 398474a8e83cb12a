#include "ring3pc/verify.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

namespace ring3pc {

GrElem GrVec::get(std::size_t i) const {
  const unsigned d = ring->d();
  return GrElem(*ring, std::vector<std::uint64_t>(at(i), at(i) + d));
}

void GrVec::set(std::size_t i, const GrElem& e) {
  if (&e.ring() != ring) throw UsageError("GrVec: ring mismatch");
  std::copy(e.coeffs().begin(), e.coeffs().end(), at(i));
}

namespace {

using u64 = std::uint64_t;
using MG = Masked<GrElem>;

// Small fixed-size scratch element.
struct Tmp {
  u64 v[64];
};

inline void add(const GrRing& R, const u64* a, const u64* b, u64* out) {
  for (unsigned i = 0; i < R.d(); ++i) out[i] = (a[i] + b[i]) & R.mask();
}
inline void sub(const GrRing& R, const u64* a, const u64* b, u64* out) {
  for (unsigned i = 0; i < R.d(); ++i) out[i] = (a[i] - b[i]) & R.mask();
}
inline void scale_into(const GrRing& R, const u64* a, u64 s, u64* out) {
  for (unsigned i = 0; i < R.d(); ++i) out[i] = (a[i] * s) & R.mask();
}
// f(ω) = f0 + x·(f1 − f0)
inline void at_omega(const GrRing& R, const u64* f0, const u64* f1, u64* out) {
  u64 t[64];
  sub(R, f1, f0, t);
  R.mul_by_x(t, t);
  add(R, f0, t, out);
}

// Wide accumulator: one unreduced inner product.
struct Wide {
  u64 t[128];
  Wide() { std::memset(t, 0, sizeof t); }
  GrElem finish(const GrRing& R) {
    GrElem e(R);
    R.reduce_wide(t, e.coeffs_mut().data());
    return e;
  }
};


bool is_p0(PartyId p) { return p == PartyId::P0; }

void check_phase(Party& p) {
  if (p.phase() != Phase::Postprocessing || !p.logs().frozen())
    throw HarnessError("challenges open only in postprocessing after the gate log is frozen");
}

}  // namespace

Challenges draw_challenges(Party& p, const GrRing& ring, unsigned R) {
  if (p.phase() != Phase::Preprocessing) throw HarnessError("challenges must be drawn in preprocessing");
  auto v = shc_random(p, GrD(ring), R + 2);
  Challenges c;
  c.r = v[0];
  c.zeta.assign(v.begin() + 1, v.begin() + 1 + R);
  c.alpha = v[R + 1];
  return c;
}

GrElem open_challenge(Party& p, const GrRing& ring, const Masked<GrElem>& share) {
  check_phase(p);
  std::vector<MG> one{share};
  return rec(p, GrD(ring), std::span<const MG>(one))[0];
}

SpanVec SpanVec::dense(const GrRing& r, std::size_t count) {
  SpanVec v;
  v.ring = &r;
  v.n = count;
  v.B = r.d();
  v.monomial = true;
  v.c.assign(count * v.B, 0);
  return v;
}

SpanVec SpanVec::scalars(const GrRing& r, std::size_t count) {
  SpanVec v;
  v.ring = &r;
  v.n = count;
  v.B = 1;
  v.monomial = false;
  v.basis = GrVec(r, 1);
  v.basis.at(0)[0] = 1;
  v.c.assign(count, 0);
  return v;
}

namespace {

// out = Σ_S c_S·basis_S
void span_entry(const GrRing& R, const GrVec& basis, unsigned B, const u64* c, u64* out) {
  const unsigned d = R.d();
  u64 acc[64] = {};
  for (unsigned S = 0; S < B; ++S) {
    const u64 cs = c[S];
    if (!cs) continue;
    const u64* e = basis.at(S);
    for (unsigned i = 0; i < d; ++i) acc[i] += cs * e[i];
  }
  for (unsigned i = 0; i < d; ++i) out[i] = acc[i] & R.mask();
}

}  // namespace

GrElem SpanVec::get(std::size_t i) const {
  GrElem e(*ring);
  if (monomial) {
    for (unsigned k = 0; k < ring->d(); ++k) e.coeffs_mut()[k] = at(i)[k] & ring->mask();
  } else {
    span_entry(*ring, basis, B, at(i), e.coeffs_mut().data());
  }
  return e;
}

void SpanVec::materialize() {
  if (monomial) return;
  SpanVec o = dense(*ring, n);
  for (std::size_t i = 0; i < n; ++i) span_entry(*ring, basis, B, at(i), o.at(i));
  *this = std::move(o);
}

namespace {

IpShare::Lifted empty_lifted(PartyId p, std::size_t n, const GrRing& R, std::size_t powers) {
  IpShare::Lifted l;
  l.powers = GrVec(R, powers);
  l.pw.reserve(n);
  l.xa.reserve(n);
  if (!is_p0(p)) l.xb.reserve(n);
  return l;
}

// P0 keeps the full mask r in slot a; P1/P2 keep (m, [r]_j).
void push_entry(IpShare& s, PartyId p, std::uint32_t pw, const Masked<RingElem>& x, const Masked<RingElem>& y) {
  const GrRing& R = s.ring();
  if (x.a.width() != R.ell() || y.a.width() != R.ell()) throw UsageError("log width does not match the Galois ring");
  auto& l = *s.lifted;
  const std::size_t k = l.pw.size();
  l.pw.push_back(pw);
  if (is_p0(p)) {
    l.xa.push_back((x.a + x.b).value());
    s.ya.at(k)[0] = (y.a + y.b).value();
  } else {
    l.xa.push_back(x.a.value());
    l.xb.push_back(x.b.value());
    s.ya.at(k)[0] = y.a.value();
    s.yb.at(k)[0] = y.b.value();
  }
}

IpShare lifted_share(PartyId p, const GrRing& R, std::size_t n, std::size_t powers) {
  IpShare s;
  s.folded = is_p0(p);
  s.z = {GrElem(R), GrElem(R)};
  s.lifted = empty_lifted(p, n, R, powers);
  s.ya = SpanVec::scalars(R, n);
  if (!s.folded) s.yb = SpanVec::scalars(R, n);
  return s;
}

// Entry k of x slot a or b: a pointer into the dense vector, or the lifted entry expanded
// into buf.
class XEntries {
 public:
  explicit XEntries(const IpShare& s) : s_(s), R_(s.ring()) {}
  const u64* operator()(bool b, std::size_t k, u64* buf) const {
    if (!s_.lifted) return b ? s_.xb.at(k) : s_.xa.at(k);
    const auto& l = *s_.lifted;
    scale_into(R_, l.powers.at(l.pw[k]), b ? l.xb[k] : l.xa[k], buf);
    return buf;
  }

 private:
  const IpShare& s_;
  const GrRing& R_;
};

// Σ over entries of X·Y with Y in a span: A_S accumulates c_S·X, and the result is
// Σ_S basis_S·A_S (a shifted sum for the monomial basis).
class SpanAcc {
 public:
  SpanAcc(const GrRing& R, unsigned B, bool monomial) : R_(R), B_(B), mono_(monomial), A_(std::size_t{B} * R.d(), 0) {}
  void add(const u64* c, const u64* X) {
    const unsigned d = R_.d();
    for (unsigned S = 0; S < B_; ++S) {
      const u64 cs = c[S];
      if (!cs) continue;
      u64* a = &A_[std::size_t{S} * d];
      for (unsigned i = 0; i < d; ++i) a[i] += cs * X[i];
    }
  }
  GrElem finish(const GrVec& basis) const {
    const unsigned d = R_.d();
    GrElem out(R_);
    if (mono_) {
      u64 t[128] = {};
      for (unsigned S = 0; S < B_; ++S)
        for (unsigned i = 0; i < d; ++i) t[S + i] += A_[std::size_t{S} * d + i];
      R_.reduce_wide(t, out.coeffs_mut().data());
      return out;
    }
    u64 a[64];
    for (unsigned S = 0; S < B_; ++S) {
      for (unsigned i = 0; i < d; ++i) a[i] = A_[std::size_t{S} * d + i] & R_.mask();
      R_.mul_acc(basis.at(S), a, out.coeffs_mut().data());
    }
    return out;
  }

 private:
  const GrRing& R_;
  unsigned B_;
  bool mono_;
  std::vector<u64> A_;
};

// The y side of a pair line evaluated at ω: g(ω) = y0 + ω(y1 − y0). In a span this is
// [c0, c1 − c0] over the basis extended by ω·basis; in the monomial basis it is a plain
// coefficient array.
struct OmegaSpan {
  unsigned B;
  bool monomial;
  GrVec basis;
  OmegaSpan(const GrRing& R, const SpanVec& y) : B(y.monomial ? R.d() : 2 * y.B), monomial(y.monomial) {
    if (monomial) return;
    basis = GrVec(R, B);
    for (unsigned S = 0; S < y.B; ++S) {
      std::memcpy(basis.at(S), y.basis.at(S), R.d() * sizeof(u64));
      R.mul_by_x(y.basis.at(S), basis.at(y.B + S));
    }
  }
  void coefs(const GrRing& R, unsigned yB, const u64* c0, const u64* c1, u64* out) const {
    if (monomial) {
      at_omega(R, c0, c1, out);
      return;
    }
    for (unsigned S = 0; S < yB; ++S) {
      out[S] = c0[S];
      out[yB + S] = c1[S] - c0[S];
    }
  }
};

// Spans grow by one challenge per fold while 2B stays within this bound.
unsigned span_limit(const GrRing& R) { return std::max(1u, R.d() / 4); }

}  // namespace

const GrRing& IpShare::ring() const { return z.a.ring(); }

std::size_t IpShare::size() const { return lifted ? lifted->pw.size() : xa.n; }

GrElem IpShare::x(bool slot_b, std::size_t i) const {
  GrElem e(ring());
  u64 buf[64];
  const u64* p = XEntries(*this)(slot_b, i, buf);
  std::copy(p, p + ring().d(), e.coeffs_mut().begin());
  return e;
}

void IpShare::densify() {
  ya.materialize();
  if (!folded) yb.materialize();
  if (!lifted) return;
  const GrRing& R = ring();
  const std::size_t n = size();
  XEntries X(*this);
  GrVec da(R, n), db(R, folded ? 0 : n);
  u64 buf[64];
  for (std::size_t k = 0; k < n; ++k) {
    std::memcpy(da.at(k), X(false, k, buf), R.d() * sizeof(u64));
    if (!folded) std::memcpy(db.at(k), X(true, k, buf), R.d() * sizeof(u64));
  }
  xa = std::move(da), xb = std::move(db);
  lifted.reset();
}

IpShare tran(PartyId p, const GrRing& R, std::span<const MulRecord> muls, const GrElem& r) {
  IpShare s = lifted_share(p, R, muls.size(), muls.size());
  const GrFixedMul rmul(r);
  GrElem P = r;
  for (std::size_t i = 0; i < muls.size(); ++i) {
    const auto& m = muls[i];
    s.lifted->powers.set(i, P);
    push_entry(s, p, static_cast<std::uint32_t>(i), m.x, m.y);
    s.z.a += P.scaled(m.z.a.value());
    s.z.b += P.scaled(m.z.b.value());
    if (i + 1 < muls.size()) rmul.apply(P.coeffs().data(), P.coeffs_mut().data());
  }
  return s;
}

IpShare consolidate(PartyId p, const GrRing& R, std::span<const DotRecord> dots, const GrElem& r) {
  std::size_t n = 0;
  for (const auto& d : dots) {
    if (d.x.size() != d.y.size()) throw UsageError("consolidate: length mismatch");
    n += d.x.size();
  }
  IpShare s = lifted_share(p, R, n, dots.size());
  GrElem P = r;
  for (std::size_t j = 0; j < dots.size(); ++j) {
    const auto& d = dots[j];
    s.lifted->powers.set(j, P);
    for (std::size_t i = 0; i < d.x.size(); ++i) push_entry(s, p, static_cast<std::uint32_t>(j), d.x[i], d.y[i]);
    s.z.a += P.scaled(d.z.a.value());
    s.z.b += P.scaled(d.z.b.value());
    if (j + 1 < dots.size()) P *= r;
  }
  return s;
}

void pad(IpShare& s, unsigned R) {
  const std::size_t step = std::size_t{1} << R;
  const std::size_t n = s.size();
  const std::size_t target = n == 0 ? step : (n + step - 1) / step * step;
  if (target == n) return;
  auto grow_y = [&](SpanVec& v) {
    v.c.resize(target * v.B, 0);
    v.n = target;
  };
  grow_y(s.ya);
  if (!s.folded) grow_y(s.yb);
  if (s.lifted) {
    auto& l = *s.lifted;
    if (l.powers.n == 0) l.powers = GrVec(s.ring(), 1);
    l.pw.resize(target, 0);
    l.xa.resize(target, 0);
    if (!s.folded) l.xb.resize(target, 0);
    return;
  }
  auto grow = [&](GrVec& v) {
    v.c.resize(target * v.ring->d(), 0);
    v.n = target;
  };
  grow(s.xa);
  if (!s.folded) grow(s.xb);
}

IpShare reduce(Party& p, IpShare in, const MG& zeta_share) {
  const GrRing& R = in.ring();
  const GrD dom(R);
  const std::size_t n = in.size();
  if (n < 2 || n % 2) throw UsageError("reduce: length must be even and at least 2");
  const std::size_t h = n / 2;
  const PartyId me = p.id();
  const XEntries X(in);
  const SpanVec& Ya = in.ya;
  const unsigned yB = Ya.B;
  const OmegaSpan om(R, Ya);
  const bool mono = Ya.monomial;
  u64 b0[64], b1[64], b2[64], b3[64], fx[64], fr[64];
  u64 ca[128], cb[128], cc[128];

  // Deal Γ for h(0) = Σ x_{2i} y_{2i} and h(ω) = Σ f_i(ω) g_i(ω).
  auto rz = sha_random(p, dom, 2);
  std::vector<GrElem> gamma;
  if (is_p0(me)) {
    SpanAcc w0(R, yB, mono), w1(R, om.B, mono);
    for (std::size_t i = 0; i < h; ++i) {
      const u64 *x0 = X(false, 2 * i, b0), *x1 = X(false, 2 * i + 1, b1);
      w0.add(Ya.at(2 * i), x0);
      at_omega(R, x0, x1, fx);
      om.coefs(R, yB, Ya.at(2 * i), Ya.at(2 * i + 1), ca);
      w1.add(ca, fx);
    }
    gamma.push_back(w0.finish(Ya.basis) + rz[0].a + rz[0].b);
    gamma.push_back(w1.finish(om.basis) + rz[1].a + rz[1].b);
  }
  auto g = sha_input(p, dom, std::span<const GrElem>(gamma), 2, "vrf.gamma");

  // m_h shares. P1: −Σ(m_x r_y + m_y r_x); P2: Σ(m_x (m_y − r_y) − m_y r_x).
  std::vector<GrElem> s;
  if (!is_p0(me)) {
    const bool p2 = me == PartyId::P2;
    const SpanVec& Yb = in.yb;
    SpanAcc w0(R, yB, mono), w1(R, om.B, mono);
    // cm, cr: y-side coefficients (length Bc) of m_y and r_y; mx, rx: dense x sides.
    auto term = [&](const u64* mx, const u64* rx, const u64* cm, const u64* cr, unsigned Bc, SpanAcc& w) {
      for (unsigned S = 0; S < Bc; ++S) cc[S] = p2 ? cm[S] - cr[S] : 0 - cr[S];
      w.add(cc, mx);
      for (unsigned S = 0; S < Bc; ++S) cc[S] = 0 - cm[S];
      w.add(cc, rx);
    };
    for (std::size_t i = 0; i < h; ++i) {
      const std::size_t e = 2 * i, o = 2 * i + 1;
      const u64 *mx0 = X(false, e, b0), *rx0 = X(true, e, b1), *mx1 = X(false, o, b2), *rx1 = X(true, o, b3);
      term(mx0, rx0, Ya.at(e), Yb.at(e), yB, w0);
      at_omega(R, mx0, mx1, fx);
      at_omega(R, rx0, rx1, fr);
      om.coefs(R, yB, Ya.at(e), Ya.at(o), ca);
      om.coefs(R, yB, Yb.at(e), Yb.at(o), cb);
      term(fx, fr, ca, cb, om.B, w1);
    }
    s.push_back(w0.finish(Ya.basis) + g[0].a);
    s.push_back(w1.finish(om.basis) + g[1].a);
  }
  auto mz = exchange_mz(p, dom, s, "vrf.mz");
  const GrElem zero(R);
  MG h0 = from_mask(me, rz[0], is_p0(me) ? zero : mz[0]);
  MG hw = from_mask(me, rz[1], is_p0(me) ? zero : mz[1]);
  MG h1 = in.z - h0;

  const GrElem zeta = open_challenge(p, R, zeta_share);
  const UnitPointBasis basis(R);
  auto wts = basis.weights(zeta);

  IpShare out;
  out.folded = in.folded;
  out.z = scale(h0, wts[0]) + scale(h1, wts[1]) + scale(hw, wts[2]);
  const GrFixedMul zmul(zeta);
  // x_{2i} + ζ(x_{2i+1} − x_{2i})
  // Lifted entries sharing few powers P_j: ζ·(s1 P_b − s0 P_a) = s1·ζP_b − s0·ζP_a from the
  // precomputed ζP_j.
  GrVec zp;
  if (in.lifted && in.lifted->powers.n < h) {
    zp = GrVec(R, in.lifted->powers.n);
    for (std::size_t j = 0; j < zp.n; ++j) zmul.apply(in.lifted->powers.at(j), zp.at(j));
  }
  auto fold_x = [&](bool slot_b) {
    GrVec o(R, h);
    u64 t[64];
    if (zp.n) {
      const auto& l = *in.lifted;
      const auto& sv = slot_b ? l.xb : l.xa;
      for (std::size_t i = 0; i < h; ++i) {
        const u64 s0 = sv[2 * i], s1 = sv[2 * i + 1];
        const u64 *pa = l.powers.at(l.pw[2 * i]), *za = zp.at(l.pw[2 * i]), *zb = zp.at(l.pw[2 * i + 1]);
        u64* dst = o.at(i);
        for (unsigned k = 0; k < R.d(); ++k) dst[k] = (s0 * pa[k] + s1 * zb[k] - s0 * za[k]) & R.mask();
      }
      return o;
    }
    for (std::size_t i = 0; i < h; ++i) {
      const u64 *v0 = X(slot_b, 2 * i, b0), *v1 = X(slot_b, 2 * i + 1, b1);
      sub(R, v1, v0, t);
      zmul.apply(t, t);
      add(R, v0, t, o.at(i));
    }
    return o;
  };
  // The same line on the y side: the span gains ζ·basis while small, else plain arrays.
  auto fold_y = [&](SpanVec v) {
    if (!v.monomial && 2 * v.B > span_limit(R)) v.materialize();
    SpanVec o;
    o.ring = &R;
    o.n = h;
    if (!v.monomial) {
      o.B = 2 * v.B;
      o.monomial = false;
      o.basis = GrVec(R, o.B);
      for (unsigned S = 0; S < v.B; ++S) {
        std::memcpy(o.basis.at(S), v.basis.at(S), R.d() * sizeof(u64));
        zmul.apply(v.basis.at(S), o.basis.at(v.B + S));
      }
      o.c.resize(h * o.B);
      for (std::size_t i = 0; i < h; ++i) {
        const u64 *c0 = v.at(2 * i), *c1 = v.at(2 * i + 1);
        u64* dst = o.at(i);
        for (unsigned S = 0; S < v.B; ++S) {
          dst[S] = c0[S];
          dst[v.B + S] = c1[S] - c0[S];
        }
      }
      return o;
    }
    o = SpanVec::dense(R, h);
    u64 t[64];
    for (std::size_t i = 0; i < h; ++i) {
      sub(R, v.at(2 * i + 1), v.at(2 * i), t);
      zmul.apply(t, t);
      add(R, v.at(2 * i), t, o.at(i));
    }
    return o;
  };
  out.xa = fold_x(false);
  if (!in.folded) out.xb = fold_x(true);
  in.lifted.reset();
  out.ya = fold_y(std::move(in.ya));
  if (!in.folded) out.yb = fold_y(std::move(in.yb));
  return out;
}

bool vdot(Party& p, const IpShare& in, const MG& alpha) {
  const bool plain = !in.lifted && in.ya.monomial && (in.folded || in.yb.monomial);
  IpShare dense;
  if (!plain) {
    dense = in;
    dense.densify();
  }
  const IpShare& s = plain ? in : dense;
  const GrRing& R = alpha.a.ring();
  const GrD dom(R);
  const unsigned d = R.d();
  const std::size_t n = s.size();
  const PartyId me = p.id();
  const GrElem zero(R);
  const MG negz = -s.z;

  // Γ for the n products α·x_i and for the (n+1)-term inner product, dealt together.
  auto rz = sha_random(p, dom, n + 1);
  std::vector<GrElem> gamma;
  if (is_p0(me)) {
    const GrElem ra = alpha.a + alpha.b;
    const u64* rac = ra.coeffs().data();
    gamma.reserve(n + 1);
    Wide w;
    for (std::size_t i = 0; i < n; ++i) {
      GrElem gi(R);
      R.mul(rac, s.xa.at(i), gi.coeffs_mut().data());
      gamma.push_back(gi + rz[i].a + rz[i].b);
      const GrElem rzi = rz[i].a + rz[i].b;
      R.mul_wide_acc(rzi.coeffs().data(), s.ya.at(i), w.t);
    }
    const GrElem rnz = negz.a + negz.b;
    R.mul_wide_acc(rac, rnz.coeffs().data(), w.t);
    gamma.push_back(w.finish(R) + rz[n].a + rz[n].b);
  }
  auto g = sha_input(p, dom, std::span<const GrElem>(gamma), n + 1, "vrf.gamma");

  const bool p2 = me == PartyId::P2;
  // share of m for x·y with x = (mx, rx) and y = (my, ry), accumulated into w
  auto term = [&](const u64* mx, const u64* rx, const u64* my, const u64* ry, Wide& w) {
    u64 t[64];
    if (p2) {
      sub(R, my, ry, t);
      R.mul_wide_acc(mx, t, w.t);
    } else {
      for (unsigned k = 0; k < d; ++k) t[k] = (0 - ry[k]) & R.mask();
      R.mul_wide_acc(mx, t, w.t);
    }
    for (unsigned k = 0; k < d; ++k) t[k] = (0 - rx[k]) & R.mask();
    R.mul_wide_acc(my, t, w.t);
  };

  std::vector<GrElem> s1;
  if (!is_p0(me)) {
    const u64 *ma = alpha.a.coeffs().data(), *ra = alpha.b.coeffs().data();
    s1.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Wide w;
      term(ma, ra, s.xa.at(i), s.xb.at(i), w);
      s1.push_back(w.finish(R) + g[i].a);
    }
  }
  auto mx1 = exchange_mz(p, dom, s1, "vrf.mz");

  std::vector<GrElem> s2;
  if (!is_p0(me)) {
    Wide w;
    for (std::size_t i = 0; i < n; ++i) term(mx1[i].coeffs().data(), rz[i].a.coeffs().data(), s.ya.at(i), s.yb.at(i), w);
    term(alpha.a.coeffs().data(), alpha.b.coeffs().data(), negz.a.coeffs().data(), negz.b.coeffs().data(), w);
    s2.push_back(w.finish(R) + g[n].a);
  }
  auto md = exchange_mz(p, dom, s2, "vrf.mz");
  std::vector<MG> delta{from_mask(me, rz[n], is_p0(me) ? zero : md[0])};
  auto v = rec(p, dom, std::span<const MG>(delta));
  return v[0].is_zero();
}

namespace {

bool run_chain(Party& p, IpShare s, unsigned R, const Challenges& ch) {
  if (ch.zeta.size() != R) throw UsageError("challenge count does not match R");
  pad(s, R);
  for (unsigned k = 0; k < R; ++k) s = reduce(p, std::move(s), ch.zeta[k]);
  return vdot(p, s, ch.alpha);
}

}  // namespace

bool mulv(Party& p, const GrRing& ring, std::span<const MulRecord> muls, unsigned R, const Challenges& ch) {
  const GrElem r = open_challenge(p, ring, ch.r);
  return run_chain(p, tran(p.id(), ring, muls, r), R, ch);
}

bool bsv(Party& p, const GrRing& ring, std::span<const DotRecord> dots, unsigned R, const Challenges& ch) {
  const GrElem r = open_challenge(p, ring, ch.r);
  return run_chain(p, consolidate(p.id(), ring, dots, r), R, ch);
}

unsigned max_reductions(std::uint64_t N) {
  unsigned R = 0;
  while (N >= (std::uint64_t{2} << R)) ++R;
  return R;
}

VerifyCost verify_cost(std::uint64_t N, unsigned R) {
  const std::uint64_t step = std::uint64_t{1} << R;
  const std::uint64_t np = N == 0 ? 1 : (N + step - 1) / step;
  VerifyCost c;
  // rec r: 3; per reduction: two exchanges (4) and rec ζ (3); final products 2N', dot 2, rec Δ 3.
  c.online_elems = 3 + 7 * std::uint64_t{R} + 2 * np + 5;
  c.deal_elems = 2 * std::uint64_t{R} + np + 1;
  c.online_rounds = 1 + 2 * std::uint64_t{R} + 3;
  c.deal_rounds = R + 1;
  return c;
}

std::uint64_t mulv_online_formula_bits(std::uint64_t N, unsigned R, unsigned ell, unsigned d) {
  return (5 * std::uint64_t{R} + 3 + (N >> R)) * ell * d;
}

unsigned auto_reductions(std::uint64_t N, unsigned ell, unsigned d, const NetProfile& net) {
  const std::uint64_t eb = std::uint64_t{d} * wire_bytes(ell);
  unsigned best = 0;
  double best_t = std::numeric_limits<double>::infinity();
  for (unsigned R = 0; R <= max_reductions(N); ++R) {
    auto c = verify_cost(N, R);
    double t = net.seconds(c.online_rounds + c.deal_rounds, (c.online_elems + c.deal_elems) * eb);
    if (t < best_t) {
      best_t = t;
      best = R;
    }
  }
  return best;
}

std::vector<VerifyPlan> plan_verification(Party& p, const std::map<unsigned, WidthCounts>& counts, const VerifyOptions& opt) {
  std::vector<VerifyPlan> plans;
  for (const auto& [ell, c] : counts) {
    const GrRing& ring = GrRing::get(ell, opt.d);
    for (LogKind k : {LogKind::Mul, LogKind::Dot}) {
      const std::size_t n = k == LogKind::Mul ? c.muls : c.dot_terms;
      if (n == 0) continue;
      // Unit-point halving needs d ≥ 2, so d = 1 verifies without reductions.
      unsigned R = opt.d < 2 ? 0 : opt.R ? std::min(*opt.R, max_reductions(n)) : auto_reductions(n, ell, opt.d, opt.net);
      plans.push_back({ell, k, n, R, draw_challenges(p, ring, R)});
    }
  }
  return plans;
}

bool run_verification(Party& p, const std::vector<VerifyPlan>& plans, unsigned d) {
  p.logs().freeze();
  bool ok = true;
  for (const auto& plan : plans) {
    const GrRing& ring = GrRing::get(plan.ell, d);
    const TripleLog* log = p.logs().find(plan.ell);
    static const TripleLog empty;
    if (!log) log = &empty;
    const bool pass = plan.kind == LogKind::Mul ? mulv(p, ring, log->muls, plan.R, plan.ch)
                                                : bsv(p, ring, log->dots, plan.R, plan.ch);
    ok = ok && pass;
  }
  return ok;
}

GrElem ip_defect(const IpPlain& t) {
  GrElem acc = -t.z;
  for (std::size_t i = 0; i < t.x.size(); ++i) acc += t.x[i] * t.y[i];
  return acc;
}

IpPlain reduce_plain_unit(const IpPlain& t, const GrElem& zeta) {
  const GrRing& R = t.z.ring();
  const UnitPointBasis basis(R);
  const GrElem w = basis.omega();
  GrElem h0(R), hw(R);
  IpPlain out;
  for (std::size_t i = 0; i + 1 < t.x.size(); i += 2) {
    h0 += t.x[i] * t.y[i];
    GrElem fw = t.x[i] + w * (t.x[i + 1] - t.x[i]);
    GrElem gw = t.y[i] + w * (t.y[i + 1] - t.y[i]);
    hw += fw * gw;
    out.x.push_back(line_eval(t.x[i], t.x[i + 1], zeta));
    out.y.push_back(line_eval(t.y[i], t.y[i + 1], zeta));
  }
  out.z = basis.eval(h0, t.z - h0, hw, zeta);
  return out;
}

IpPlain reduce_plain_even(const IpPlain& t, const GrElem& zeta_half, const GrElem& e0, const GrElem& e2) {
  const GrRing& R = t.z.ring();
  const GrElem two = GrElem::embed(R, 2);
  const GrElem zeta = zeta_half * two;
  GrElem h0 = e0.valid() ? e0 : GrElem(R), h2 = e2.valid() ? e2 : GrElem(R);
  IpPlain out;
  for (std::size_t i = 0; i + 1 < t.x.size(); i += 2) {
    h0 += t.x[i] * t.y[i];
    h2 += line_eval(t.x[i], t.x[i + 1], two) * line_eval(t.y[i], t.y[i + 1], two);
    out.x.push_back(line_eval(t.x[i], t.x[i + 1], zeta));
    out.y.push_back(line_eval(t.y[i], t.y[i + 1], zeta));
  }
  GrElem h1 = t.z - h0;
  out.z = quad_eval(h0, h1, h2, zeta);
  return out;
}

}  // namespace ring3pc
