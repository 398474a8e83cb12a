#include "ring3pc/prg.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <utility>

#include "ring3pc/errors.hpp"

namespace ring3pc {

Prg::Prg(const Seed& key, std::uint64_t tag) : tag_(tag) {
  auto* c = EVP_CIPHER_CTX_new();
  if (!c || EVP_EncryptInit_ex(c, EVP_aes_128_ecb(), nullptr, key.data(), nullptr) != 1)
    throw HarnessError("AES initialisation failed");
  EVP_CIPHER_CTX_set_padding(c, 0);
  ctx_ = c;
}

Prg::~Prg() {
  if (ctx_) EVP_CIPHER_CTX_free(static_cast<EVP_CIPHER_CTX*>(ctx_));
}

Prg::Prg(Prg&& o) noexcept
    : ctx_(std::exchange(o.ctx_, nullptr)), tag_(o.tag_), counter_(o.counter_), buf_(o.buf_), pos_(o.pos_),
      bits_(o.bits_), nbits_(o.nbits_) {}

Prg& Prg::operator=(Prg&& o) noexcept {
  if (this != &o) {
    if (ctx_) EVP_CIPHER_CTX_free(static_cast<EVP_CIPHER_CTX*>(ctx_));
    ctx_ = std::exchange(o.ctx_, nullptr);
    tag_ = o.tag_;
    counter_ = o.counter_;
    buf_ = o.buf_;
    pos_ = o.pos_;
    bits_ = o.bits_;
    nbits_ = o.nbits_;
  }
  return *this;
}

void Prg::refill() {
  std::array<std::uint8_t, 4096> in;
  for (std::size_t b = 0; b < in.size() / 16; ++b) {
    std::uint64_t ctr = counter_++;
    for (int i = 0; i < 8; ++i) {
      in[16 * b + i] = static_cast<std::uint8_t>(tag_ >> (8 * i));
      in[16 * b + 8 + i] = static_cast<std::uint8_t>(ctr >> (8 * i));
    }
  }
  int outl = 0;
  if (EVP_EncryptUpdate(static_cast<EVP_CIPHER_CTX*>(ctx_), buf_.data(), &outl, in.data(), static_cast<int>(in.size())) != 1 ||
      outl != static_cast<int>(in.size()))
    throw HarnessError("AES encryption failed");
  pos_ = 0;
}

void Prg::fill(std::uint8_t* out, std::size_t n) {
  while (n) {
    if (pos_ == buf_.size()) refill();
    std::size_t k = std::min(n, buf_.size() - pos_);
    std::memcpy(out, buf_.data() + pos_, k);
    pos_ += k;
    out += k;
    n -= k;
  }
}

std::uint64_t Prg::next_u64() {
  std::uint8_t b[8];
  fill(b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

bool Prg::next_bit() {
  if (nbits_ == 0) {
    bits_ = next_u64();
    nbits_ = 64;
  }
  bool b = bits_ & 1;
  bits_ >>= 1;
  --nbits_;
  return b;
}

std::uint64_t tag_of(std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Digest sha256(const std::uint8_t* p, std::size_t n) { return Hasher().update(p, n).finish(); }

Hasher::Hasher() : ctx_(EVP_MD_CTX_new()) {
  if (!ctx_ || EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr) != 1)
    throw HarnessError("SHA-256 initialisation failed");
}

Hasher::~Hasher() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

Hasher& Hasher::update(const std::uint8_t* p, std::size_t n) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), p, n);
  return *this;
}

Hasher& Hasher::update_u64(std::uint64_t v) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return update(b, 8);
}

Digest Hasher::finish() {
  Digest d;
  unsigned int n = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), d.data(), &n);
  return d;
}

}  // namespace ring3pc
