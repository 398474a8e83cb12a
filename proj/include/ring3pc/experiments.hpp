#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ring3pc/config.hpp"

namespace ring3pc {

enum class BenchOp { Mul, Dot, DotTrunc };
BenchOp bench_op_from_string(std::string_view s);
std::string to_string(BenchOp op);

/// Byte counts are protocol payload summed over all channels; formulas use ⌈ℓ/8⌉ bytes per
/// ring element and d of them per Galois ring element.
struct BenchReport {
  BenchOp op;
  unsigned ell, d, R;
  std::size_t n, batch;
  bool verified;
  std::uint64_t offline_bytes, offline_formula;
  std::uint64_t online_bytes, online_formula, online_rounds;
  std::uint64_t verify_bytes, verify_model, verify_rounds, verify_model_rounds;
  /// (5R + 3 + N/2^R)·ℓ·d bits over R + 2 rounds, the reference figure for verification.
  std::uint64_t verify_reference, verify_reference_rounds;
  double offline_s, online_s, verify_s;  // latency model
};

/// `batch` independent instances: MUL gates, or DOT/DOT+TRUNC gates of length n over random
/// operands. Truncation shifts by cfg.k.
BenchReport run_bench(BenchOp op, std::size_t n, std::size_t batch, const RunConfig& cfg, bool verify = true);

/// Header row of bench_csv.
std::string bench_csv_header();
std::string bench_csv(const BenchReport& r);

/// Reference offline/online bits per instance of other protocols, kept as constants.
struct ReferenceCost {
  const char* protocol;
  BenchOp op;
  unsigned offline_per_ell, offline_per_n_ell;  // offline = (a + b·n)·ℓ
  unsigned online_per_ell, online_per_n_ell;
};
const std::vector<ReferenceCost>& reference_costs();

enum class ErrorMode { Random, Msb, Gamma, Mz, Crafted };
struct ErrorSpec {
  ErrorMode mode = ErrorMode::Random;
  std::uint64_t crafted = 0;  // error for Crafted
};
/// random, msb, gamma, mz or crafted:<hex>.
ErrorSpec parse_error_mode(std::string_view s);
std::string to_string(const ErrorSpec& m);

struct SoundnessRow {
  std::size_t trial;
  std::string injected_at;  // PARTY:HOOK:ERROR@OCCURRENCE#WORD
  bool detected;
};

/// One session per trial with G multiplications in a single round at (ℓ, d, R). Each trial
/// corrupts one word of one message:
///   random: a random party, P0 on Γ_2 and P1/P2 on m_z, random nonzero error
///   msb:    P2 adds 2^{ℓ−1} to m_z
///   gamma:  P0 adds a random nonzero error to Γ_2
///   mz:     P1 adds a random nonzero error to m_z
///   crafted: P1 adds the given error to m_z
/// The gate index is uniform in [0, G). Detected means the session aborted or failed verification.
std::vector<SoundnessRow> run_soundness(const ErrorSpec& mode, unsigned ell, unsigned d, unsigned R, std::size_t G, std::size_t trials,
                                        std::uint64_t seed);

/// Compression alone over GR(2^ℓ, 1) = Z_{2^ℓ}: P2 adds 2^{ℓ−1} to m_z of a random gate, the
/// relation errors e_i are recovered from the gate logs, and the trial accepts when
/// Σ r^{i+1} e_i = 0 for a fresh uniform r. Returns one flag per trial, true for accepted.
std::vector<bool> run_control(unsigned ell, std::size_t G, std::size_t trials, std::uint64_t seed);

/// Header row of soundness_csv.
std::string soundness_csv_header();
std::string soundness_csv(const std::vector<SoundnessRow>& rows);

}  // namespace ring3pc
