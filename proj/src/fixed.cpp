#include "ring3pc/fixed.hpp"

#include <cmath>
#include <string>

#include "ring3pc/errors.hpp"

namespace ring3pc {

RingElem encode_fixed(double x, unsigned k, unsigned ell) {
  if (ell < 2 || k + 1 >= ell) throw UsageError("fixed point needs k + 1 < ell");
  if (!std::isfinite(x) || std::fabs(x) >= std::ldexp(1.0, static_cast<int>(ell - k - 1)))
    throw EncodingError("value " + std::to_string(x) + " out of fixed-point range");
  const double scaled = std::trunc(std::ldexp(x, static_cast<int>(k)));
  // |scaled| < 2^{ell−1} ≤ 2^63, so the signed cast is exact.
  return RingElem(static_cast<std::uint64_t>(static_cast<std::int64_t>(scaled)), ell);
}

double decode_fixed(RingElem v, unsigned k) { return std::ldexp(static_cast<double>(v.signed_value()), -static_cast<int>(k)); }

}  // namespace ring3pc
