#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ring3pc/harness.hpp"

namespace ring3pc {

struct Layer {
  enum class Kind { Conv, FC, ReLU, MaxPool };
  explicit Layer(Kind k) : kind(k) {}
  Kind kind;
  // Conv: kernels × in_c × kh × kw weights, zero padding `pad` on every side.
  unsigned kernels = 0, kh = 0, kw = 0, stride = 1, pad = 0;
  // FC: out × in weights, row-major.
  unsigned in = 0, out = 0;
  // MaxPool: non-overlapping window × window.
  unsigned window = 0;
  std::vector<double> weights;
};

struct Shape {
  unsigned c, h, w;
  std::size_t size() const { return std::size_t{c} * h * w; }
  bool operator==(const Shape&) const = default;
};

struct ModelSpec {
  unsigned k = 16;  // fractional bits
  Shape input{1, 28, 28};
  std::vector<Layer> layers;
};

/// Output shape of every layer; ConfigError on any inconsistency.
std::vector<Shape> shape_chain(const ModelSpec& m);

/// 28×28 input, conv of 5 kernels 5×5 stride 2 pad 1 (5×13×13), ReLU, FC 845→10.
/// Weights uniform in ±1/sqrt(fan_in) from the seed.
ModelSpec snn_model(std::uint64_t seed);
/// Pixels uniform in [0, 1) from the seed.
std::vector<double> random_image(std::uint64_t seed, const Shape& s = {1, 28, 28});

/// Fixture: text header ending in "end\n", then every layer's weights as little-endian
/// IEEE-754 doubles in layer order.
///   ring3pc-model 1
///   k 16
///   input 1 28 28
///   conv 5 5 5 2 1      (kernels kh kw stride pad)
///   relu
///   fc 845 10           (in out)
///   maxpool 2
///   end
std::string serialize_model(const ModelSpec& m);
ModelSpec parse_model(std::string_view bytes);
/// Whitespace-separated reals.
std::vector<double> parse_image(std::string_view text);

/// Plain fixed-point evaluation: encoded weights and pixels, exact ring products, floor
/// truncation by k after each linear layer.
std::vector<RingElem> oracle_infer(const ModelSpec& m, const std::vector<double>& image, unsigned ell = 64);
/// Per-score tolerance in ulps: each linear layer maps an input error bound e to
/// ceil(Σ|W|·e / 2^k) + 2 per output.
std::vector<std::uint64_t> score_bounds(const ModelSpec& m);

struct InferOwners {
  PartyId model = PartyId::P1;
  PartyId data = PartyId::P2;
};

/// Gate program for one inference. Linear layers are one round of inner products with
/// the truncation fused in; weights and pixels enter through Π_shc from their owners.
std::vector<Wire> infer_program(Evaluator& ev, const ModelSpec& m, const std::vector<double>& image, InferOwners owners,
                                unsigned ell = 64);

struct InferResult {
  SessionResult session;
  std::vector<RingElem> raw;  // opened scores; empty after an abort
  std::vector<double> scores;
};

InferResult infer(const ModelSpec& m, const std::vector<double>& image, const SessionConfig& cfg, InferOwners owners = {});

/// Index of the largest signed value; the first one on ties.
std::size_t argmax(const std::vector<RingElem>& v);

}  // namespace ring3pc
