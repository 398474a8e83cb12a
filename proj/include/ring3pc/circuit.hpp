#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ring3pc/evaluator.hpp"

namespace ring3pc {

enum class Op { Input, Const, Add, Scale, Mul, Dot, Trunc, Relu, Maxpool };

struct Gate {
  Op op;
  std::uint32_t out = 0;
  std::vector<std::uint32_t> in;  // DOT: a1..an then b1..bn
  std::uint64_t c = 0;            // CONST value, SCALE factor
  unsigned t = 0;                 // TRUNC shift
  PartyId owner = PartyId::P0;    // INPUT owner
  std::size_t line = 0;
};

/// Text format, one gate per line ('#' starts a comment):
///   INPUT w k | CONST w v | ADD w a b | SCALE w c a | MUL w a b | DOT w n a1..an b1..bn
///   TRUNC w a t | RELU w a | MAXPOOL w n a1..an | OUTPUT a
/// Every wire is defined once, before it is read.
struct Circuit {
  unsigned ell = 64;
  std::vector<Gate> gates;
  std::vector<std::uint32_t> outputs;
  std::uint32_t wires = 0;  // 1 + largest wire id

  std::string to_text() const;
};

/// ParseError carries the offending line number.
Circuit parse_circuit(std::string_view text, unsigned ell = 64);

using InputMap = std::map<std::uint32_t, RingElem>;

/// Plain evaluation. TRUNC is the arithmetic shift; RELU and MAXPOOL use the signed reading.
std::vector<RingElem> plain_eval(const Circuit& c, const InputMap& inputs);

/// Runs the circuit on the evaluator. Linear gates are local; independent MUL/DOT gates
/// share one round. A TRUNC whose input comes from a MUL/DOT in the same wave takes its mask
/// from the truncation pair; any other TRUNC goes through Evaluator::trunc.
/// Only the owner's entries of `inputs` are read.
std::vector<Wire> eval_circuit(Evaluator& ev, const Circuit& c, const InputMap& inputs);

/// Lines "w v" with v decimal (optionally negative) or 0x-hex.
InputMap parse_inputs(std::string_view text, unsigned ell);

}  // namespace ring3pc
