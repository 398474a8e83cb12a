#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ring3pc/errors.hpp"

namespace ring3pc {

using Bytes = std::vector<std::uint8_t>;

constexpr std::uint64_t width_mask(unsigned w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

/// Element of Z_{2^w}. The stored value is always < 2^w.
class RingElem {
 public:
  constexpr RingElem() = default;
  constexpr RingElem(std::uint64_t v, unsigned width) : v_(v & width_mask(width)), w_(static_cast<std::uint8_t>(width)) {
    if (width < 1 || width > 64) throw UsageError("ring width must be in 1..64");
  }

  constexpr std::uint64_t value() const { return v_; }
  constexpr unsigned width() const { return w_; }
  /// Two's-complement reading of the value.
  constexpr std::int64_t signed_value() const {
    if (w_ == 64) return static_cast<std::int64_t>(v_);
    std::uint64_t sign = std::uint64_t{1} << (w_ - 1);
    return static_cast<std::int64_t>((v_ ^ sign)) - static_cast<std::int64_t>(sign);
  }
  constexpr bool bit(unsigned i) const { return i < w_ && ((v_ >> i) & 1); }

  friend constexpr RingElem operator+(RingElem a, RingElem b) { return {check(a, b) + b.v_, a.w_, raw_tag{}}; }
  friend constexpr RingElem operator-(RingElem a, RingElem b) { return {check(a, b) - b.v_, a.w_, raw_tag{}}; }
  friend constexpr RingElem operator*(RingElem a, RingElem b) { return {check(a, b) * b.v_, a.w_, raw_tag{}}; }
  friend constexpr RingElem operator-(RingElem a) { return {std::uint64_t{0} - a.v_, a.w_, raw_tag{}}; }
  RingElem& operator+=(RingElem o) { return *this = *this + o; }
  RingElem& operator-=(RingElem o) { return *this = *this - o; }
  RingElem& operator*=(RingElem o) { return *this = *this * o; }
  friend constexpr bool operator==(RingElem a, RingElem b) { return a.w_ == b.w_ && a.v_ == b.v_; }

  constexpr RingElem shl(unsigned s) const { return {s >= 64 ? 0 : v_ << s, w_, raw_tag{}}; }
  /// Logical right shift.
  constexpr RingElem lshr(unsigned s) const { return {s >= 64 ? 0 : v_ >> s, w_, raw_tag{}}; }
  /// Arithmetic right shift: the top bit is replicated into the vacated positions.
  constexpr RingElem ashr(unsigned s) const {
    if (s >= w_) return {bit(w_ - 1) ? ~std::uint64_t{0} : 0, w_, raw_tag{}};
    std::uint64_t r = v_ >> s;
    if (bit(w_ - 1)) r |= width_mask(w_) & ~(width_mask(w_) >> s);
    return {r, w_, raw_tag{}};
  }

 private:
  struct raw_tag {};
  constexpr RingElem(std::uint64_t v, std::uint8_t w, raw_tag) : v_(v & width_mask(w)), w_(w) {}
  static constexpr std::uint64_t check(RingElem a, RingElem b) {
    if (a.w_ != b.w_) throw UsageError("ring width mismatch");
    return a.v_;
  }

  std::uint64_t v_ = 0;
  std::uint8_t w_ = 64;
};

/// Bytes one element of Z_{2^w} occupies on the wire.
constexpr std::size_t wire_bytes(unsigned w) { return (w + 7) / 8; }

void put_word(Bytes& out, std::uint64_t v, unsigned width);
std::uint64_t get_word(const std::uint8_t* p, unsigned width);

/// Sequential decoder over a received payload.
class ByteReader {
 public:
  explicit ByteReader(const Bytes& b) : b_(b) {}
  std::uint64_t word(unsigned width);
  bool done() const { return pos_ == b_.size(); }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  const Bytes& b_;
  std::size_t pos_ = 0;
};

}  // namespace ring3pc
