#include "ring3pc/ring.hpp"

#include "ring3pc/errors.hpp"

namespace ring3pc {

void put_word(Bytes& out, std::uint64_t v, unsigned width) {
  for (std::size_t i = 0; i < wire_bytes(width); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_word(const std::uint8_t* p, unsigned width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < wire_bytes(width); ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v & width_mask(width);
}

std::uint64_t ByteReader::word(unsigned width) {
  std::size_t n = wire_bytes(width);
  if (pos_ + n > b_.size()) throw HarnessError("payload shorter than expected");
  std::uint64_t v = get_word(b_.data() + pos_, width);
  pos_ += n;
  return v;
}

}  // namespace ring3pc
