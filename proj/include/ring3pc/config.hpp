#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ring3pc/harness.hpp"

namespace ring3pc {

/// Parameters shared by every command. Defaults follow the benchmark setting ℓ = 64, d = 64.
struct RunConfig {
  unsigned ell = 64;
  unsigned d = 64;
  std::optional<unsigned> R;  // auto when unset
  std::uint64_t seed = 1;
  NetProfile net = lan();
  std::string adversary;  // see parse_adversary; empty for an honest run
  AdderKind adder = AdderKind::Ripple;
  unsigned k = 16;  // fractional bits for inference
  PartyId model_owner = PartyId::P1;
  PartyId data_owner = PartyId::P2;

  /// ConfigError naming the first unsupported value.
  void validate() const;
  SessionConfig session() const;
};

/// Applies one key=value setting. Keys: ell, d, R (integer or "auto"), seed, net
/// (lan|man|wan), rtt_ms, mbps, adversary, adder (ripple|prefix), k, model_owner, data_owner.
void apply_setting(RunConfig& c, std::string_view key, std::string_view value);
/// Flat key=value lines; '#' starts a comment. ConfigError carries the line number.
RunConfig parse_config(std::string_view text, RunConfig base = {});
/// RING3PC_SEED, when set, replaces the seed.
void apply_env(RunConfig& c);

/// PARTY:HOOK:ERROR[@OCCURRENCE][#WORD], e.g. "P0:gamma:+1" or "P1:mz:-3@2#5".
/// ERROR is a signed decimal added to the word modulo 2^width. OCCURRENCE counts messages
/// under HOOK from 0 ("*" for every one, default 0); WORD indexes the payload (default 0).
AdversaryConfig parse_adversary(std::string_view spec);

}  // namespace ring3pc
