#pragma once

#include <array>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ring3pc/evaluator.hpp"
#include "ring3pc/verify.hpp"

namespace ring3pc {

struct SessionConfig {
  std::uint64_t seed = 1;  // master seed for η01, η02, η12
  std::uint64_t session_id = 0;
  AdversaryConfig adversary;
  bool verify = true;
  VerifyOptions verify_opts;
  AdderKind adder = AdderKind::Ripple;
  bool hash_channels = false;
  bool keep_logs = false;
  std::chrono::milliseconds timeout{300000};
};

/// Gate program run by every party in both passes. Returns the wires to open at the end.
using Program = std::function<std::vector<Wire>(Evaluator&)>;

struct PlanSummary {
  unsigned ell;
  LogKind kind;
  std::size_t n;
  unsigned R;
};

struct SessionResult {
  bool aborted = false;
  std::string abort_reason;
  std::optional<PartyId> aborted_by;
  /// Every verification check passed (false when verification did not complete).
  bool verified = false;
  /// Opened output values per party; empty for a party that aborted.
  std::array<std::vector<RingElem>, 3> outputs;
  Transcript transcript;
  std::map<unsigned, WidthCounts> counts;
  std::vector<PlanSummary> plans;
  std::array<GateLogs, 3> logs;  // filled when keep_logs is set
};

/// Runs prep pass, online pass, verification and output opening on three threads.
/// Harness failures are rethrown; aborts are reported in the result.
SessionResult run_session(const SessionConfig& cfg, const Program& prog);

}  // namespace ring3pc
