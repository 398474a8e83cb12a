#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "ring3pc/gate_log.hpp"
#include "ring3pc/prg.hpp"
#include "ring3pc/transport.hpp"

namespace ring3pc {

enum class Pair : std::uint8_t { P01 = 0, P02 = 1, P12 = 2 };
bool holds(PartyId p, Pair s);
/// The seed shared by two distinct parties.
Pair pair_of(PartyId a, PartyId b);

/// The pairwise seeds one party holds; the third stays empty.
struct SeedSet {
  std::array<std::optional<Seed>, 3> seeds;
  bool has(Pair s) const { return seeds[static_cast<unsigned>(s)].has_value(); }
};

/// Derives η01, η02, η12 from a master seed and hands each party its two.
std::array<SeedSet, 3> setup_seeds(std::uint64_t master);

/// One party's runtime: role, seeds, endpoint, gate logs and per-party counters.
class Party {
 public:
  Party(PartyId id, SeedSet seeds, Endpoint& ep);

  PartyId id() const { return id_; }
  bool is(PartyId p) const { return id_ == p; }
  Endpoint& net() { return ep_; }
  Phase phase() const { return ep_.phase(); }
  void enter(Phase p) { ep_.enter(p); }
  std::uint64_t session_id() const { return ep_.session_id(); }

  /// Stream (seed, label). CapabilityError if this party does not hold the seed.
  Prg& stream(Pair s, const std::string& label);

  /// Sequential id for reconstructions; every party advances it in lockstep.
  std::uint64_t next_rec_id() { return rec_id_++; }

  GateLogs& logs() { return logs_; }
  const GateLogs& logs() const { return logs_; }

 private:
  PartyId id_;
  SeedSet seeds_;
  Endpoint& ep_;
  std::map<std::pair<unsigned, std::string>, Prg> streams_;
  std::uint64_t rec_id_ = 0;
  GateLogs logs_;
};

}  // namespace ring3pc
