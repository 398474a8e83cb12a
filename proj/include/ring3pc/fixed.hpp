#pragma once

#include "ring3pc/ring.hpp"

namespace ring3pc {

/// Fixed point with k fractional bits in Z_{2^ell}: ⌊x·2^k⌋ rounded toward zero, negatives
/// as 2^ell + that value. EncodingError unless |x| < 2^{ell−k−1}.
RingElem encode_fixed(double x, unsigned k, unsigned ell = 64);
double decode_fixed(RingElem v, unsigned k);

}  // namespace ring3pc
