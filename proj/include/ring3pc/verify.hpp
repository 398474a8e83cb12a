#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ring3pc/evaluator.hpp"
#include "ring3pc/galois.hpp"
#include "ring3pc/netmodel.hpp"

namespace ring3pc {

/// n elements of one Galois ring in a flat coefficient arena.
struct GrVec {
  const GrRing* ring = nullptr;
  std::size_t n = 0;
  std::vector<std::uint64_t> c;

  GrVec() = default;
  GrVec(const GrRing& r, std::size_t count) : ring(&r), n(count), c(count * r.d(), 0) {}
  std::uint64_t* at(std::size_t i) { return c.data() + i * ring->d(); }
  const std::uint64_t* at(std::size_t i) const { return c.data() + i * ring->d(); }
  GrElem get(std::size_t i) const;
  void set(std::size_t i, const GrElem& e);
};

/// n elements with entry i = Σ_S c[i·B + S]·basis[S]. With `monomial` the basis is
/// 1, x, …, x^{d−1} and entries are plain coefficient arrays (B = d, basis unused).
/// Folding by public challenges keeps the y side of a relation in a small span, so inner
/// products against it cost B·d instead of d² words per entry.
struct SpanVec {
  const GrRing* ring = nullptr;
  std::size_t n = 0;
  unsigned B = 0;
  bool monomial = true;
  GrVec basis;
  std::vector<std::uint64_t> c;

  SpanVec() = default;
  /// Plain coefficient arrays, all zero.
  static SpanVec dense(const GrRing& r, std::size_t count);
  /// Base-ring scalars: basis {1}.
  static SpanVec scalars(const GrRing& r, std::size_t count);
  std::uint64_t* at(std::size_t i) { return c.data() + i * B; }
  const std::uint64_t* at(std::size_t i) const { return c.data() + i * B; }
  GrElem get(std::size_t i) const;
  /// Converts to the monomial basis.
  void materialize();
};

/// One party's share of an inner-product relation Σ x_i·y_i = z over GR.
/// P1/P2 keep (m, [r]_j) in slots (a, b). P0 keeps the full mask r of each vector entry in
/// slot a and leaves slot b empty; its scalar z keeps both mask shares.
struct IpShare {
  GrVec xa, xb;
  SpanVec ya, yb;
  Masked<GrElem> z;
  bool folded = false;  // P0's layout
  /// x side as produced by tran/consolidate while xa/xb are empty: entry i is the
  /// base-ring value x_i times powers[pw[i]].
  struct Lifted {
    GrVec powers;
    std::vector<std::uint32_t> pw;
    std::vector<std::uint64_t> xa, xb;
  };
  std::optional<Lifted> lifted;

  const GrRing& ring() const;
  std::size_t size() const;
  GrElem x(bool slot_b, std::size_t i) const;
  GrElem y(bool slot_b, std::size_t i) const { return (slot_b ? yb : ya).get(i); }
  /// Dense x vectors and monomial y vectors.
  void densify();
};

/// Challenge shares drawn with Π_shc in preprocessing: r for compression, ζ_k per
/// reduction, α for the final check.
struct Challenges {
  Masked<GrElem> r;
  std::vector<Masked<GrElem>> zeta;
  Masked<GrElem> alpha;
};

Challenges draw_challenges(Party& p, const GrRing& ring, unsigned R);

/// Reconstructs a challenge. HarnessError unless the party is in Postprocessing with a
/// frozen gate log.
GrElem open_challenge(Party& p, const GrRing& ring, const Masked<GrElem>& share);

/// Compression of a multiplication log: x'_i = r^{i+1}·x_i, z = Σ r^{i+1}·z_i. Local.
IpShare tran(PartyId p, const GrRing& ring, std::span<const MulRecord> muls, const GrElem& r);
/// Consolidation of inner-product logs: entries of dot j and z_j are scaled by r^{j+1}. Local.
IpShare consolidate(PartyId p, const GrRing& ring, std::span<const DotRecord> dots, const GrElem& r);
/// Appends zero entries until the length is a multiple of 2^R.
void pad(IpShare& s, unsigned R);

/// One halving: h(0) and h(ω) by two GR inner products, h(1) = z − h(0), ζ opened, then
/// every pair line and h are evaluated at ζ. Points are the units {0, 1, ω = x}.
IpShare reduce(Party& p, IpShare in, const Masked<GrElem>& zeta);
/// α·x_i by N GR products, then Δ = Σ (α x_i)·y_i + α·(−z) by one inner product; true iff Δ = 0.
bool vdot(Party& p, const IpShare& s, const Masked<GrElem>& alpha);

bool mulv(Party& p, const GrRing& ring, std::span<const MulRecord> muls, unsigned R, const Challenges& ch);
bool bsv(Party& p, const GrRing& ring, std::span<const DotRecord> dots, unsigned R, const Challenges& ch);

/// Closed forms in units of GR elements (multiply by d·⌈ℓ/8⌉ for bytes). N is the
/// relation length before padding.
struct VerifyCost {
  std::uint64_t online_elems;  // payload outside the Γ deals
  std::uint64_t deal_elems;    // Γ_2 messages
  std::uint64_t online_rounds;
  std::uint64_t deal_rounds;
};
VerifyCost verify_cost(std::uint64_t N, unsigned R);
/// (5R + 3 + N/2^R)·ℓ·d bits, the reference online figure.
std::uint64_t mulv_online_formula_bits(std::uint64_t N, unsigned R, unsigned ell, unsigned d);
/// Largest R with 2^R ≤ N.
unsigned max_reductions(std::uint64_t N);
/// argmin over R of the latency model applied to verify_cost; ties go to the smaller R.
unsigned auto_reductions(std::uint64_t N, unsigned ell, unsigned d, const NetProfile& net);

struct VerifyOptions {
  unsigned d = 64;
  std::optional<unsigned> R;  // auto when unset
  NetProfile net = lan();
};

enum class LogKind { Mul, Dot };

struct VerifyPlan {
  unsigned ell;
  LogKind kind;
  std::size_t n;  // relation length
  unsigned R;
  Challenges ch;
};

/// One plan per (width, kind) with a nonempty log. Draws challenges, so it runs in the
/// prep pass after the evaluator has finished it.
std::vector<VerifyPlan> plan_verification(Party& p, const std::map<unsigned, WidthCounts>& counts, const VerifyOptions& opt);
/// Freezes the logs and runs every plan in Postprocessing. False if any check failed.
bool run_verification(Party& p, const std::vector<VerifyPlan>& plans, unsigned d);

/// Plaintext relation (x, y, z) over GR, used to measure reduction soundness.
struct IpPlain {
  std::vector<GrElem> x, y;
  GrElem z;
};
/// Σ x_i y_i − z.
GrElem ip_defect(const IpPlain& t);
/// Reduction at the unit points {0, 1, ω} with h(1) = z − h(0).
IpPlain reduce_plain_unit(const IpPlain& t, const GrElem& zeta);
/// Reduction at the points {0, 1, 2} evaluated at 2ζ'. Additive errors (e0, e2) shift h(0)
/// and h(2); h(1) = z − h(0).
IpPlain reduce_plain_even(const IpPlain& t, const GrElem& zeta_half, const GrElem& e0 = {}, const GrElem& e2 = {});

}  // namespace ring3pc
