#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "ring3pc/circuit.hpp"
#include "ring3pc/config.hpp"
#include "ring3pc/experiments.hpp"
#include "ring3pc/ppml.hpp"

using namespace ring3pc;

namespace {

constexpr int kOk = 0, kAbort = 2, kConfig = 3, kParse = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ConfigError("cannot write '" + path + "'");
}

/// Settings shared by every subcommand; precedence is defaults < --config < RING3PC_SEED < flags.
struct Common {
  std::string config_path;
  std::map<std::string, std::string> flags;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value configuration file");
    for (const char* key : {"ell", "d", "R", "seed", "net", "rtt_ms", "mbps", "adversary", "adder", "k", "model_owner", "data_owner"}) {
      std::string name = "--" + std::string(key);
      for (auto& ch : name)
        if (ch == '_') ch = '-';
      app->add_option_function<std::string>(name, [this, key](const std::string& v) { flags[key] = v; },
                                            std::string("overrides '") + key + "'");
    }
  }

  RunConfig resolve() const {
    RunConfig c;
    if (!config_path.empty()) c = parse_config(read_file(config_path));
    apply_env(c);
    for (const auto& [k, v] : flags) apply_setting(c, k, v);
    c.validate();
    return c;
  }
};

std::string signed_string(const RingElem& v) { return std::to_string(v.signed_value()); }

int cmd_simulate(const Common& common, const std::string& circuit_path, const std::string& inputs_path, const std::string& transcript_path,
                 const std::string& accounting_path) {
  const RunConfig cfg = common.resolve();
  const Circuit circ = parse_circuit(read_file(circuit_path), cfg.ell);
  const InputMap inputs = inputs_path.empty() ? InputMap{} : parse_inputs(read_file(inputs_path), cfg.ell);
  for (const auto& g : circ.gates)
    if (g.op == Op::Input && !inputs.count(g.out))
      throw ParseError("no input value for wire " + std::to_string(g.out), g.line);
  SessionResult res = run_session(cfg.session(), [&](Evaluator& ev) { return eval_circuit(ev, circ, inputs); });
  if (!transcript_path.empty()) write_out(transcript_path, res.transcript.csv());
  if (!accounting_path.empty()) write_out(accounting_path, res.transcript.accounting_csv());
  if (res.aborted) {
    std::cerr << "abort: " << res.abort_reason;
    if (res.aborted_by) std::cerr << " (first raised by " << to_string(*res.aborted_by) << ")";
    std::cerr << '\n';
    return kAbort;
  }
  const auto& out = res.outputs[idx(PartyId::P1)];
  for (std::size_t i = 0; i < out.size(); ++i) std::cout << "out " << circ.outputs[i] << ' ' << signed_string(out[i]) << '\n';
  const Transcript& tr = res.transcript;
  std::cout << "online_rounds " << tr.rounds(Phase::Online) << " (input " << tr.rounds(Phase::Online, "input") << ", gates "
            << tr.rounds(Phase::Online, "exchange") << ")\n";
  std::cout << "online_gate_bytes " << tr.hook_bytes(Phase::Online, "mz") << '\n';
  std::cout << "verified " << (res.verified ? "yes" : "no") << '\n';
  return kOk;
}

int cmd_bench(const Common& common, const std::string& op, std::size_t n, std::size_t batch, bool no_verify, bool reference,
              const std::string& out_path) {
  const RunConfig cfg = common.resolve();
  const BenchOp bop = bench_op_from_string(op);
  const BenchReport r = run_bench(bop, n, batch, cfg, !no_verify);
  std::string text = bench_csv_header() + bench_csv(r);
  if (reference) {
    // Per-instance bits at this ℓ and n.
    text += "\nprotocol,op,offline_bits,online_bits\n";
    const std::uint64_t nn = bop == BenchOp::Mul ? 1 : n;
    for (const auto& c : reference_costs())
      if (c.op == bop)
        text += std::string(c.protocol) + ',' + to_string(c.op) + ',' + std::to_string((c.offline_per_ell + c.offline_per_n_ell * nn) * cfg.ell) +
                ',' + std::to_string((c.online_per_ell + c.online_per_n_ell * nn) * cfg.ell) + '\n';
    text += "ours," + to_string(bop) + ',' + std::to_string(r.offline_bytes * 8 / batch) + ',' + std::to_string(r.online_bytes * 8 / batch) + '\n';
  }
  write_out(out_path, text);
  return kOk;
}

std::vector<unsigned> parse_list(const std::string& s, const char* what) {
  std::vector<unsigned> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto dots = item.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(static_cast<unsigned>(std::stoul(item)));
      } else {
        unsigned a = static_cast<unsigned>(std::stoul(item.substr(0, dots))), b = static_cast<unsigned>(std::stoul(item.substr(dots + 2)));
        for (unsigned v = a; v <= b; ++v) out.push_back(v);
      }
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": expected a list like 0,2,4 or 0..6, got '" + s + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

int cmd_soundness(const Common& common, const std::string& modes, const std::string& d_list, const std::string& r_list, std::size_t G,
                  std::size_t trials, const std::string& trials_path, const std::string& sweep, const std::string& out_path) {
  const RunConfig cfg = common.resolve();
  std::ostringstream summary;
  if (!sweep.empty()) {
    // Honest cost sweep over R at fixed G.
    summary << "R,G,d,measured_bytes,model_bytes,reference_bytes,measured_rounds,latency_s\n";
    for (unsigned R : parse_list(sweep, "--sweep-R")) {
      RunConfig c = cfg;
      c.R = R;
      c.validate();
      auto b = run_bench(BenchOp::Mul, 1, G, c);
      summary << b.R << ',' << G << ',' << c.d << ',' << b.verify_bytes << ',' << b.verify_model << ',' << b.verify_reference << ','
              << b.verify_rounds << ',' << b.verify_s << '\n';
    }
    write_out(out_path, summary.str());
    return kOk;
  }
  std::string per_trial = std::string("mode,d,R,") + soundness_csv_header();
  summary << "mode,ell,d,R,G,trials,detected,rate,bound\n";
  std::stringstream ms(modes);
  std::string mode;
  while (std::getline(ms, mode, ',')) {
    for (unsigned d : d_list.empty() ? std::vector<unsigned>{cfg.d} : parse_list(d_list, "--d-list")) {
      for (unsigned R : r_list.empty() ? std::vector<unsigned>{cfg.R.value_or(0)} : parse_list(r_list, "--R-list")) {
        RunConfig c = cfg;
        c.d = d;
        c.R = R;
        c.validate();
        std::size_t detected = 0;
        std::string bound = "";
        if (mode == "control") {
          auto acc = run_control(c.ell, G, trials, c.seed);
          for (std::size_t t = 0; t < acc.size(); ++t) {
            detected += !acc[t];
            per_trial += "control,1,0," + std::to_string(t) + ",P2:mz:+2^" + std::to_string(c.ell - 1) + ',' + (acc[t] ? "0" : "1") + '\n';
          }
          d = 1;
          R = 0;
          bound = "0.5";
        } else {
          auto rows = run_soundness(parse_error_mode(mode), c.ell, d, R, G, trials, c.seed);
          for (const auto& r : rows) detected += r.detected;
          std::string body = soundness_csv(rows), prefix = mode + ',' + std::to_string(d) + ',' + std::to_string(R) + ',';
          std::stringstream bs(body);
          for (std::string line; std::getline(bs, line);) per_trial += prefix + line + '\n';
          // 1 − G/2^{d−R−2}, when positive.
          const int e = static_cast<int>(d) - static_cast<int>(R) - 2;
          const double b = e > 0 ? 1.0 - static_cast<double>(G) / std::ldexp(1.0, e) : 0.0;
          bound = std::to_string(b > 0 ? b : 0.0);
        }
        summary << mode << ',' << c.ell << ',' << d << ',' << R << ',' << G << ',' << trials << ',' << detected << ','
                << (trials ? static_cast<double>(detected) / static_cast<double>(trials) : 0.0) << ',' << bound << '\n';
        if (mode == "control") break;
      }
      if (mode == "control") break;
    }
  }
  if (!trials_path.empty()) write_out(trials_path, per_trial);
  write_out(out_path, summary.str());
  return kOk;
}

int cmd_infer(const Common& common, const std::string& model_path, std::uint64_t model_seed, const std::string& image_path,
              std::uint64_t image_seed, const std::string& write_model, bool check) {
  const RunConfig cfg = common.resolve();
  const ModelSpec m = model_path.empty() ? snn_model(model_seed) : parse_model(read_file(model_path));
  if (!write_model.empty()) write_out(write_model, serialize_model(m));
  const std::vector<double> image = image_path.empty() ? random_image(image_seed, m.input) : parse_image(read_file(image_path));
  InferResult r = infer(m, image, cfg.session(), {cfg.model_owner, cfg.data_owner});
  if (r.session.aborted) {
    std::cerr << "abort: " << r.session.abort_reason << '\n';
    std::cout << "verdict abort\n";
    return kAbort;
  }
  std::cout << "index,raw,score\n";
  for (std::size_t i = 0; i < r.raw.size(); ++i) std::cout << i << ',' << signed_string(r.raw[i]) << ',' << r.scores[i] << '\n';
  std::cout << "argmax " << argmax(r.raw) << '\n';
  if (check) {
    auto want = oracle_infer(m, image, cfg.ell);
    auto bound = score_bounds(m);
    bool ok = want.size() == r.raw.size();
    for (std::size_t i = 0; ok && i < want.size(); ++i) {
      const std::int64_t diff = (r.raw[i] - want[i]).signed_value();
      ok = static_cast<std::uint64_t>(diff < 0 ? -diff : diff) <= bound[i];
    }
    std::cout << "oracle_argmax " << argmax(want) << "\noracle_match " << (ok ? "yes" : "no") << '\n';
  }
  std::cout << "verdict " << (r.session.verified ? "verified" : "unverified") << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-party computation over Z_2^ell with Galois-ring verification"};
  app.require_subcommand(1);

  Common c_sim, c_bench, c_snd, c_inf;

  auto* sim = app.add_subcommand("simulate", "run a circuit file through all three phases");
  std::string circuit, inputs, transcript, accounting;
  sim->add_option("circuit", circuit, "circuit file")->required();
  sim->add_option("--inputs", inputs, "input values, lines 'wire value'");
  sim->add_option("--transcript", transcript, "write the per-channel transcript CSV here ('-' for stdout)");
  sim->add_option("--accounting", accounting, "write the payload/digest accounting CSV here");
  c_sim.attach(sim);

  auto* bench = app.add_subcommand("bench", "measured against closed-form communication");
  std::string op = "mul", bench_out;
  std::size_t n = 1, batch = 1024;
  bool no_verify = false, reference = false;
  bench->add_option("op", op, "mul, dot or dot-trunc")->required();
  bench->add_option("--n", n, "inner-product length");
  bench->add_option("--batch", batch, "independent instances in one round");
  bench->add_flag("--no-verify", no_verify, "skip postprocessing");
  bench->add_flag("--reference", reference, "append the reference table for other protocols");
  bench->add_option("--out", bench_out, "CSV destination");
  c_bench.attach(bench);

  auto* snd = app.add_subcommand("soundness", "detection rates under injected errors");
  std::string modes = "random", d_list, r_list, trials_path, sweep, snd_out;
  std::size_t G = 64, trials = 1000;
  snd->add_option("--error-mode,--mode", modes, "comma list of random, msb, gamma, mz, crafted:<hex>, control");
  snd->add_option("--d-list", d_list, "grid over d, e.g. 8,16");
  snd->add_option("--R-list", r_list, "grid over R, e.g. 0..4");
  snd->add_option("--gates,--G", G, "multiplications per session");
  snd->add_option("--trials", trials, "sessions per grid point");
  snd->add_option("--trials-csv", trials_path, "per-trial CSV destination");
  snd->add_option("--sweep-R", sweep, "honest cost sweep over R instead, e.g. 0..10");
  snd->add_option("--out", snd_out, "summary CSV destination");
  c_snd.attach(snd);

  auto* inf = app.add_subcommand("infer", "secure inference of a model fixture on one image");
  std::string model, image, write_model;
  std::uint64_t model_seed = 1, image_seed = 1;
  bool check = false;
  inf->add_option("--model", model, "model fixture (default: seeded S-NN)");
  inf->add_option("--model-seed", model_seed, "seed for the generated S-NN");
  inf->add_option("--image", image, "whitespace-separated pixels (default: seeded random image)");
  inf->add_option("--image-seed", image_seed, "seed for the generated image");
  inf->add_option("--write-model", write_model, "also save the model fixture here");
  inf->add_flag("--check", check, "compare against the plaintext fixed-point oracle");
  c_inf.attach(inf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  try {
    if (*sim) return cmd_simulate(c_sim, circuit, inputs, transcript, accounting);
    if (*bench) return cmd_bench(c_bench, op, n, batch, no_verify, reference, bench_out);
    if (*snd) return cmd_soundness(c_snd, modes, d_list, r_list, G, trials, trials_path, sweep, snd_out);
    if (*inf) return cmd_infer(c_inf, model, model_seed, image, image_seed, write_model, check);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const EncodingError& e) {
    std::cerr << "encoding error: " << e.what() << '\n';
    return kParse;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const UsageError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
