#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "ring3pc/ring.hpp"

namespace ring3pc {

using Seed = std::array<std::uint8_t, 16>;
using Digest = std::array<std::uint8_t, 32>;

/// AES-128 in counter mode. Block i of stream (key, tag) is AES_key(tag || i), both halves
/// little-endian 64-bit, so the zero key with tag 0 starts with AES_0(0).
class Prg {
 public:
  Prg(const Seed& key, std::uint64_t tag);
  ~Prg();
  Prg(const Prg&) = delete;
  Prg& operator=(const Prg&) = delete;
  Prg(Prg&&) noexcept;
  Prg& operator=(Prg&&) noexcept;

  void fill(std::uint8_t* out, std::size_t n);
  std::uint64_t next_u64();
  bool next_bit();
  std::uint64_t blocks_used() const { return counter_; }

 private:
  void refill();
  void* ctx_ = nullptr;
  std::uint64_t tag_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 4096> buf_{};
  std::size_t pos_ = 4096;
  std::uint64_t bits_ = 0;
  unsigned nbits_ = 0;
};

/// 64-bit FNV-1a, used to turn a stream label into a counter-block tag.
std::uint64_t tag_of(std::string_view label);

Digest sha256(const std::uint8_t* p, std::size_t n);

/// Incremental SHA-256.
class Hasher {
 public:
  Hasher();
  ~Hasher();
  Hasher(const Hasher&) = delete;
  Hasher& operator=(const Hasher&) = delete;
  Hasher& update(const std::uint8_t* p, std::size_t n);
  Hasher& update(const Bytes& b) { return update(b.data(), b.size()); }
  Hasher& update_u64(std::uint64_t v);
  Digest finish();

 private:
  void* ctx_;
};

}  // namespace ring3pc
