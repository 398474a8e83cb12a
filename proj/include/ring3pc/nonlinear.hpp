#pragma once

#include <span>
#include <vector>

#include "ring3pc/evaluator.hpp"

namespace ring3pc {

/// Bits of one value over Z_2, least significant first.
using BitWires = std::vector<Wire>;

/// Generated directly in the current phase; every product is logged.
std::vector<DaBit> dabits_gen(Party& p, unsigned ell, std::size_t n);
/// ell products per value for the pairwise XOR, then one ell-dimensional inner product.
std::vector<EdaBit> edabits_gen(Party& p, unsigned ell, std::size_t n);

/// Sum bits of a + b mod 2^L for each of the vectors. All inputs have L bits.
std::vector<BitWires> bit_add(Evaluator& ev, const std::vector<BitWires>& a, const std::vector<BitWires>& b);
/// Only bit L−1 of a + b.
std::vector<Wire> bit_add_msb(Evaluator& ev, const std::vector<BitWires>& a, const std::vector<BitWires>& b);

std::vector<BitWires> a2b(Evaluator& ev, std::span<const Wire> x);
std::vector<Wire> msb(Evaluator& ev, std::span<const Wire> x);
/// Z_2 wires to Z_{2^ell}.
std::vector<Wire> b2a(Evaluator& ev, std::span<const Wire> bits, unsigned ell);
/// 1 when x ≥ 0 in two's complement.
std::vector<Wire> drelu(Evaluator& ev, std::span<const Wire> x);
std::vector<Wire> relu(Evaluator& ev, std::span<const Wire> x);
/// max of each group, for |values| < 2^{ell−2}.
std::vector<Wire> maxpool(Evaluator& ev, const std::vector<std::vector<Wire>>& groups);

}  // namespace ring3pc
