#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ring3pc/arith.hpp"

namespace ring3pc {

using Wire = Masked<RingElem>;

/// ⟨r⟩ over Z_{2^ell} and over Z_2 for the same random bit r.
struct DaBit {
  Wire arith, bit;
};

/// ⟨r⟩ over Z_{2^ell} and ⟨r[i]⟩ over Z_2 with r = Σ 2^i r[i].
struct EdaBit {
  Wire arith;
  std::vector<Wire> bits;
};

enum class AdderKind { Ripple, Prefix };

struct WidthCounts {
  std::size_t muls = 0, dots = 0, dot_terms = 0;
};

/// Runs one straight-line gate program in two passes over the same code.
///
/// Prep pass: every wire carries only its mask shares (m is 0 at P1/P2). Masks and Γ
/// shares are drawn and stored on a tape, and P0's Γ_2 values are sent to P2 in one
/// message per ring width at finish_prep(). Correlated randomness that needs its own
/// interaction (truncation pairs, daBits, edaBits) is generated in full here.
///
/// Online pass: the program runs again. Masks are popped from the tape in the same order,
/// P1 and P2 exchange m_z shares, and every gate is logged for verification. Masks never
/// depend on online values, so public wires carry mask 0.
class Evaluator {
 public:
  enum class Mode { Prep, Online, Done };

  explicit Evaluator(Party& p) : p_(p) {}

  Party& party() { return p_; }
  PartyId id() const { return p_.id(); }
  Mode mode() const { return mode_; }
  bool prep() const { return mode_ == Mode::Prep; }

  /// Ends the prep pass: flushes deferred Γ_2 and rewinds the tape. Stays in Preprocessing.
  void finish_prep();
  /// Ends the online pass; the tape must be consumed exactly.
  void finish_online();

  AdderKind adder = AdderKind::Ripple;

  Wire public_wire(RingElem v) const { return public_share(p_.id(), v, RingElem(0, v.width())); }
  Wire constant(unsigned ell, std::uint64_t v) const { return public_wire(RingElem(v, ell)); }

  /// Π_shc with no input owner.
  std::vector<Wire> random(unsigned ell, std::size_t n);
  /// Π_shc^k: the owner passes its n values in the online pass (ignored in prep).
  std::vector<Wire> input(PartyId owner, unsigned ell, std::span<const RingElem> x, std::size_t n);

  /// One round of independent Π_mul/Π_dot gates over Z_{2^ell}. With `trunc`, every output
  /// is truncated by t: the gate's r_z is a truncation pair's r_x and m_z is shifted locally.
  /// `pre_trunc` then receives the untruncated outputs.
  std::vector<Wire> gates(unsigned ell, std::span<const GateTask<RingElem>> tasks, std::optional<unsigned> trunc = {},
                          std::vector<Wire>* pre_trunc = nullptr);
  std::vector<Wire> mul(std::span<const Wire> x, std::span<const Wire> y);
  /// ⟨x⟩ moved onto a truncation mask through a logged product with the public 1.
  std::vector<Wire> trunc(std::span<const Wire> x, unsigned t);

  /// Π_rec of equal-width wires; zeros in the prep pass.
  std::vector<RingElem> reveal(std::span<const Wire> x);

  std::vector<EdaBit> edabits(unsigned ell, std::size_t n);
  std::vector<DaBit> dabits(unsigned ell, std::size_t n);

  /// Gates each pass logs, keyed by width. Valid once the prep pass has finished.
  const std::map<unsigned, WidthCounts>& counts() const { return counts_; }

 private:
  void push(const RingElem& v) { tape_.push_back(v); }
  RingElem pop();
  void count(unsigned ell, std::span<const GateTask<RingElem>> tasks);

  Party& p_;
  Mode mode_ = Mode::Prep;
  std::vector<RingElem> tape_;
  std::size_t cursor_ = 0;
  std::map<unsigned, std::vector<RingElem>> deferred_x2_;     // P0
  std::map<unsigned, std::vector<std::size_t>> deferred_at_;  // P2: tape slots awaiting Γ_2
  std::map<unsigned, std::size_t> deferred_n_;
  std::vector<EdaBit> eda_;
  std::vector<DaBit> da_;
  std::size_t eda_cursor_ = 0, da_cursor_ = 0;
  std::map<unsigned, WidthCounts> counts_;
};

}  // namespace ring3pc
