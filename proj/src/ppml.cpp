#include "ring3pc/ppml.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "ring3pc/fixed.hpp"
#include "ring3pc/nonlinear.hpp"

namespace ring3pc {

namespace {

std::size_t weight_count(const Layer& l, const Shape& in) {
  switch (l.kind) {
    case Layer::Kind::Conv: return std::size_t{l.kernels} * in.c * l.kh * l.kw;
    case Layer::Kind::FC: return std::size_t{l.in} * l.out;
    default: return 0;
  }
}

Shape next_shape(const Layer& l, const Shape& in) {
  switch (l.kind) {
    case Layer::Kind::Conv: {
      if (!l.kernels || !l.kh || !l.kw || !l.stride) throw ConfigError("conv: zero dimension");
      if (in.h + 2 * l.pad < l.kh || in.w + 2 * l.pad < l.kw) throw ConfigError("conv: kernel larger than padded input");
      return {l.kernels, (in.h + 2 * l.pad - l.kh) / l.stride + 1, (in.w + 2 * l.pad - l.kw) / l.stride + 1};
    }
    case Layer::Kind::FC:
      if (l.in != in.size())
        throw ConfigError("fc: expects " + std::to_string(l.in) + " inputs, got " + std::to_string(in.size()));
      if (!l.out) throw ConfigError("fc: zero outputs");
      return {l.out, 1, 1};
    case Layer::Kind::ReLU: return in;
    case Layer::Kind::MaxPool:
      if (!l.window || l.window > in.h || l.window > in.w) throw ConfigError("maxpool: bad window");
      return {in.c, in.h / l.window, in.w / l.window};
  }
  return in;
}

// Uniform in [lo, hi) from the top 53 bits; independent of the standard library's
// distribution implementations so fixtures are identical everywhere.
double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * std::ldexp(static_cast<double>(g() >> 11), -53);
}

// Input index feeding kernel tap (ky, kx) of output (oy, ox), or -1 inside the padding.
std::ptrdiff_t conv_source(const Layer& l, const Shape& in, unsigned c, unsigned oy, unsigned ox, unsigned ky, unsigned kx) {
  const std::ptrdiff_t y = std::ptrdiff_t{oy} * l.stride + ky - l.pad;
  const std::ptrdiff_t x = std::ptrdiff_t{ox} * l.stride + kx - l.pad;
  if (y < 0 || x < 0 || y >= std::ptrdiff_t{in.h} || x >= std::ptrdiff_t{in.w}) return -1;
  return (std::ptrdiff_t{c} * in.h + y) * in.w + x;
}

std::size_t conv_weight(const Layer& l, const Shape& in, unsigned k, unsigned c, unsigned ky, unsigned kx) {
  return ((std::size_t{k} * in.c + c) * l.kh + ky) * l.kw + kx;
}

// The pairs (weight index, input index) summed into every output of a linear layer.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> linear_terms(const Layer& l, const Shape& in) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  if (l.kind == Layer::Kind::FC) {
    out.resize(l.out);
    for (unsigned o = 0; o < l.out; ++o)
      for (unsigned i = 0; i < l.in; ++i) out[o].emplace_back(std::size_t{o} * l.in + i, i);
    return out;
  }
  const Shape os = next_shape(l, in);
  out.resize(os.size());
  for (unsigned k = 0; k < os.c; ++k)
    for (unsigned oy = 0; oy < os.h; ++oy)
      for (unsigned ox = 0; ox < os.w; ++ox) {
        auto& t = out[(std::size_t{k} * os.h + oy) * os.w + ox];
        for (unsigned c = 0; c < in.c; ++c)
          for (unsigned ky = 0; ky < l.kh; ++ky)
            for (unsigned kx = 0; kx < l.kw; ++kx) {
              auto src = conv_source(l, in, c, oy, ox, ky, kx);
              if (src >= 0) t.emplace_back(conv_weight(l, in, k, c, ky, kx), static_cast<std::size_t>(src));
            }
      }
  return out;
}

std::vector<std::vector<std::size_t>> pool_groups(const Layer& l, const Shape& in) {
  const Shape os = next_shape(l, in);
  std::vector<std::vector<std::size_t>> g(os.size());
  for (unsigned c = 0; c < os.c; ++c)
    for (unsigned oy = 0; oy < os.h; ++oy)
      for (unsigned ox = 0; ox < os.w; ++ox) {
        auto& v = g[(std::size_t{c} * os.h + oy) * os.w + ox];
        for (unsigned dy = 0; dy < l.window; ++dy)
          for (unsigned dx = 0; dx < l.window; ++dx)
            v.push_back((std::size_t{c} * in.h + oy * l.window + dy) * in.w + ox * l.window + dx);
      }
  return g;
}

std::vector<RingElem> encode_all(const std::vector<double>& v, unsigned k, unsigned ell) {
  std::vector<RingElem> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(encode_fixed(x, k, ell));
  return out;
}

void check_image(const ModelSpec& m, const std::vector<double>& image) {
  if (image.size() != m.input.size())
    throw ConfigError("image has " + std::to_string(image.size()) + " values, model expects " + std::to_string(m.input.size()));
}

}  // namespace

std::vector<Shape> shape_chain(const ModelSpec& m) {
  std::vector<Shape> out;
  Shape s = m.input;
  if (!s.size()) throw ConfigError("empty input shape");
  for (const auto& l : m.layers) {
    const Shape n = next_shape(l, s);
    if (l.weights.size() != weight_count(l, s))
      throw ConfigError("layer has " + std::to_string(l.weights.size()) + " weights, expected " + std::to_string(weight_count(l, s)));
    out.push_back(n);
    s = n;
  }
  return out;
}

ModelSpec snn_model(std::uint64_t seed) {
  std::mt19937_64 g(seed);
  ModelSpec m;
  m.k = 16;
  m.input = {1, 28, 28};
  Layer conv{Layer::Kind::Conv};
  conv.kernels = 5, conv.kh = 5, conv.kw = 5, conv.stride = 2, conv.pad = 1;
  const double bc = 1.0 / std::sqrt(25.0);
  conv.weights.resize(5 * 25);
  for (auto& w : conv.weights) w = uniform(g, -bc, bc);
  Layer fc{Layer::Kind::FC};
  fc.in = 5 * 13 * 13, fc.out = 10;
  const double bf = 1.0 / std::sqrt(double(fc.in));
  fc.weights.resize(std::size_t{fc.in} * fc.out);
  for (auto& w : fc.weights) w = uniform(g, -bf, bf);
  m.layers = {conv, Layer{Layer::Kind::ReLU}, fc};
  shape_chain(m);
  return m;
}

std::vector<double> random_image(std::uint64_t seed, const Shape& s) {
  std::mt19937_64 g(seed ^ 0x696d616765ULL);
  std::vector<double> v(s.size());
  for (auto& x : v) x = uniform(g, 0.0, 1.0);
  return v;
}

std::string serialize_model(const ModelSpec& m) {
  shape_chain(m);
  std::ostringstream os;
  os << "ring3pc-model 1\nk " << m.k << "\ninput " << m.input.c << ' ' << m.input.h << ' ' << m.input.w << '\n';
  for (const auto& l : m.layers) {
    switch (l.kind) {
      case Layer::Kind::Conv: os << "conv " << l.kernels << ' ' << l.kh << ' ' << l.kw << ' ' << l.stride << ' ' << l.pad << '\n'; break;
      case Layer::Kind::FC: os << "fc " << l.in << ' ' << l.out << '\n'; break;
      case Layer::Kind::ReLU: os << "relu\n"; break;
      case Layer::Kind::MaxPool: os << "maxpool " << l.window << '\n'; break;
    }
  }
  os << "end\n";
  std::string out = os.str();
  for (const auto& l : m.layers)
    for (double w : l.weights) {
      std::uint64_t b = std::bit_cast<std::uint64_t>(w);
      for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((b >> (8 * i)) & 0xff));
    }
  return out;
}

ModelSpec parse_model(std::string_view bytes) {
  ModelSpec m;
  std::size_t pos = 0, line = 0;
  bool ended = false;
  auto fields = [&](const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> f;
    for (std::string w; is >> w;) f.push_back(w);
    return f;
  };
  auto num = [&](const std::string& s) -> unsigned {
    try {
      std::size_t used = 0;
      unsigned long v = std::stoul(s, &used);
      if (used != s.size() || v > 0xffffffffUL) throw std::invalid_argument(s);
      return static_cast<unsigned>(v);
    } catch (const std::exception&) {
      throw ParseError("bad number '" + s + "'", line);
    }
  };
  auto want = [&](const std::vector<std::string>& f, std::size_t n) {
    if (f.size() != n) throw ParseError("'" + f[0] + "' takes " + std::to_string(n - 1) + " fields", line);
  };
  while (!ended) {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) throw ParseError("model header has no 'end' line", line + 1);
    std::string text(bytes.substr(pos, nl - pos));
    pos = nl + 1;
    ++line;
    auto f = fields(text);
    if (line == 1) {
      if (f.size() != 2 || f[0] != "ring3pc-model" || f[1] != "1") throw ParseError("expected 'ring3pc-model 1'", line);
      continue;
    }
    if (f.empty() || f[0][0] == '#') continue;
    if (f[0] == "k") {
      want(f, 2);
      m.k = num(f[1]);
    } else if (f[0] == "input") {
      want(f, 4);
      m.input = {num(f[1]), num(f[2]), num(f[3])};
    } else if (f[0] == "conv") {
      want(f, 6);
      Layer l{Layer::Kind::Conv};
      l.kernels = num(f[1]), l.kh = num(f[2]), l.kw = num(f[3]), l.stride = num(f[4]), l.pad = num(f[5]);
      m.layers.push_back(l);
    } else if (f[0] == "fc") {
      want(f, 3);
      Layer l{Layer::Kind::FC};
      l.in = num(f[1]), l.out = num(f[2]);
      m.layers.push_back(l);
    } else if (f[0] == "relu") {
      want(f, 1);
      m.layers.push_back(Layer{Layer::Kind::ReLU});
    } else if (f[0] == "maxpool") {
      want(f, 2);
      Layer l{Layer::Kind::MaxPool};
      l.window = num(f[1]);
      m.layers.push_back(l);
    } else if (f[0] == "end") {
      want(f, 1);
      ended = true;
    } else {
      throw ParseError("unknown layer '" + f[0] + "'", line);
    }
  }

  Shape s = m.input;
  for (auto& l : m.layers) {
    Shape n;
    try {
      n = next_shape(l, s);
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), 0);
    }
    const std::size_t need = weight_count(l, s);
    if (bytes.size() - pos < need * 8) throw ParseError("weight blob too short", 0);
    l.weights.resize(need);
    for (auto& w : l.weights) {
      std::uint64_t b = 0;
      for (int i = 0; i < 8; ++i) b |= std::uint64_t{static_cast<std::uint8_t>(bytes[pos + i])} << (8 * i);
      pos += 8;
      w = std::bit_cast<double>(b);
      if (!std::isfinite(w)) throw ParseError("non-finite weight", 0);
    }
    s = n;
  }
  if (pos != bytes.size()) throw ParseError("trailing bytes after weight blob", 0);
  return m;
}

std::vector<double> parse_image(std::string_view text) {
  std::vector<double> v;
  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      double x = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(x)) throw std::invalid_argument(tok);
      v.push_back(x);
    } catch (const std::exception&) {
      throw ParseError("bad pixel '" + tok + "' at position " + std::to_string(v.size()), 0);
    }
  }
  return v;
}

std::vector<RingElem> oracle_infer(const ModelSpec& m, const std::vector<double>& image, unsigned ell) {
  check_image(m, image);
  Shape s = m.input;
  std::vector<RingElem> x = encode_all(image, m.k, ell);
  for (const auto& l : m.layers) {
    std::vector<RingElem> y;
    switch (l.kind) {
      case Layer::Kind::Conv:
      case Layer::Kind::FC: {
        auto w = encode_all(l.weights, m.k, ell);
        for (const auto& terms : linear_terms(l, s)) {
          RingElem acc(0, ell);
          for (auto [wi, xi] : terms) acc += w[wi] * x[xi];
          y.push_back(acc.ashr(m.k));
        }
        break;
      }
      case Layer::Kind::ReLU:
        for (auto v : x) y.push_back(v.signed_value() < 0 ? RingElem(0, ell) : v);
        break;
      case Layer::Kind::MaxPool:
        for (const auto& g : pool_groups(l, s)) {
          RingElem best = x[g[0]];
          for (auto i : g)
            if (x[i].signed_value() > best.signed_value()) best = x[i];
          y.push_back(best);
        }
        break;
    }
    s = next_shape(l, s);
    x = std::move(y);
  }
  return x;
}

std::vector<std::uint64_t> score_bounds(const ModelSpec& m) {
  Shape s = m.input;
  std::vector<std::uint64_t> err(s.size(), 0);
  for (const auto& l : m.layers) {
    std::vector<std::uint64_t> next;
    switch (l.kind) {
      case Layer::Kind::Conv:
      case Layer::Kind::FC: {
        auto w = encode_all(l.weights, m.k, 64);
        for (const auto& terms : linear_terms(l, s)) {
          // Σ|W|·e fits in 128 bits for any realistic model; saturate otherwise.
          unsigned __int128 acc = 0;
          for (auto [wi, xi] : terms) {
            const std::int64_t sw = w[wi].signed_value();
            const std::uint64_t aw = sw < 0 ? 0 - static_cast<std::uint64_t>(sw) : static_cast<std::uint64_t>(sw);
            acc += static_cast<unsigned __int128>(aw) * err[xi];
          }
          const unsigned __int128 q = (acc + ((unsigned __int128)1 << m.k) - 1) >> m.k;
          next.push_back(q > ~std::uint64_t{0} - 2 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(q) + 2);
        }
        break;
      }
      case Layer::Kind::ReLU: next = err; break;
      case Layer::Kind::MaxPool:
        for (const auto& g : pool_groups(l, s)) {
          std::uint64_t e = 0;
          for (auto i : g) e = std::max(e, err[i]);
          next.push_back(e);
        }
        break;
    }
    s = next_shape(l, s);
    err = std::move(next);
  }
  return err;
}

std::vector<Wire> infer_program(Evaluator& ev, const ModelSpec& m, const std::vector<double>& image, InferOwners owners,
                                unsigned ell) {
  check_image(m, image);
  const bool online = !ev.prep();
  Shape s = m.input;
  std::vector<RingElem> pix;
  if (online && ev.id() == owners.data) pix = encode_all(image, m.k, ell);
  std::vector<Wire> x = ev.input(owners.data, ell, pix, s.size());
  for (const auto& l : m.layers) {
    switch (l.kind) {
      case Layer::Kind::Conv:
      case Layer::Kind::FC: {
        std::vector<RingElem> wv;
        if (online && ev.id() == owners.model) wv = encode_all(l.weights, m.k, ell);
        auto w = ev.input(owners.model, ell, wv, l.weights.size());
        auto terms = linear_terms(l, s);
        std::vector<GateTask<RingElem>> tasks(terms.size());
        for (std::size_t o = 0; o < terms.size(); ++o) {
          tasks[o].x.reserve(terms[o].size());
          tasks[o].y.reserve(terms[o].size());
          for (auto [wi, xi] : terms[o]) {
            tasks[o].x.push_back(w[wi]);
            tasks[o].y.push_back(x[xi]);
          }
        }
        x = ev.gates(ell, tasks, m.k);
        break;
      }
      case Layer::Kind::ReLU: x = relu(ev, x); break;
      case Layer::Kind::MaxPool: {
        std::vector<std::vector<Wire>> groups;
        for (const auto& g : pool_groups(l, s)) {
          auto& v = groups.emplace_back();
          for (auto i : g) v.push_back(x[i]);
        }
        x = maxpool(ev, groups);
        break;
      }
    }
    s = next_shape(l, s);
  }
  return x;
}

InferResult infer(const ModelSpec& m, const std::vector<double>& image, const SessionConfig& cfg, InferOwners owners) {
  shape_chain(m);
  check_image(m, image);
  InferResult r;
  r.session = run_session(cfg, [&](Evaluator& ev) { return infer_program(ev, m, image, owners); });
  if (!r.session.aborted) {
    for (const auto& o : r.session.outputs)
      if (!o.empty()) {
        r.raw = o;
        break;
      }
    for (auto v : r.raw) r.scores.push_back(decode_fixed(v, m.k));
  }
  return r;
}

std::size_t argmax(const std::vector<RingElem>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].signed_value() > v[best].signed_value()) best = i;
  return best;
}

}  // namespace ring3pc
