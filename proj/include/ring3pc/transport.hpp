#pragma once

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ring3pc/prg.hpp"
#include "ring3pc/ring.hpp"

namespace ring3pc {

enum class PartyId : std::uint8_t { P0 = 0, P1 = 1, P2 = 2 };
inline constexpr std::array<PartyId, 3> kParties{PartyId::P0, PartyId::P1, PartyId::P2};
constexpr unsigned idx(PartyId p) { return static_cast<unsigned>(p); }
std::string to_string(PartyId p);
PartyId party_from_string(std::string_view s);

enum class Phase : std::uint8_t { Preprocessing = 0, Online = 1, Postprocessing = 2 };
inline constexpr std::array<Phase, 3> kPhases{Phase::Preprocessing, Phase::Online, Phase::Postprocessing};
std::string to_string(Phase p);

/// Consistency digests are accounted apart from protocol payload.
enum class ByteClass : std::uint8_t { Payload = 0, Digest = 1 };

/// One fault injected by the corrupted party into its own outgoing messages.
struct Injection {
  std::string hook;                         // message label, e.g. "mz"
  std::optional<std::uint64_t> occurrence;  // n-th message with this label (0-based); every one if unset
  std::size_t word = 0;                     // word index inside the payload
  std::uint64_t error = 0;                  // added to that word modulo 2^width
  std::function<void(Bytes&)> tamper;       // replaces the additive rule when set
};

struct AdversaryConfig {
  std::optional<PartyId> corrupted;
  std::vector<Injection> injections;
  /// When false a failed verification is reported as a verdict instead of aborting.
  bool abort_on_detect = true;
};

struct MessageRecord {
  Phase phase;
  std::string hook;
  ByteClass cls;
  std::uint64_t bytes;
  bool tampered;
};

class Transcript {
 public:
  std::uint64_t bytes(PartyId from, PartyId to, Phase ph, ByteClass c) const {
    return bytes_[idx(from)][idx(to)][static_cast<unsigned>(ph)][static_cast<unsigned>(c)];
  }
  std::uint64_t bytes(PartyId from, PartyId to, Phase ph) const {
    return bytes(from, to, ph, ByteClass::Payload) + bytes(from, to, ph, ByteClass::Digest);
  }
  std::uint64_t total(Phase ph, ByteClass c) const;
  std::uint64_t total(Phase ph) const { return total(ph, ByteClass::Payload) + total(ph, ByteClass::Digest); }
  std::uint64_t rounds(Phase ph) const { return rounds_[static_cast<unsigned>(ph)]; }
  /// Barriers per label, e.g. "deal" for dealer-only steps.
  std::uint64_t rounds(Phase ph, const std::string& label) const;
  /// Payload bytes sent under a message label in a phase.
  std::uint64_t hook_bytes(Phase ph, const std::string& hook) const;
  const std::map<std::pair<Phase, std::string>, std::uint64_t>& hook_totals() const { return hook_bytes_; }
  const std::vector<MessageRecord>& log(PartyId from, PartyId to) const { return log_[idx(from)][idx(to)]; }
  /// Chained SHA-256 over delivered frames; all zero unless channel hashing was enabled.
  const Digest& channel_digest(PartyId from, PartyId to) const { return digest_[idx(from)][idx(to)]; }

  /// Columns: from,to,phase,bytes,rounds. One row per channel and phase; rounds is the phase total.
  std::string csv() const;
  /// Columns: from,to,phase,payload_bytes,digest_bytes.
  std::string accounting_csv() const;

  bool operator==(const Transcript& o) const;

 private:
  friend class Network;
  friend class Endpoint;
  std::uint64_t bytes_[3][3][3][2] = {};
  std::uint64_t rounds_[3] = {};
  std::map<std::pair<Phase, std::string>, std::uint64_t> round_labels_;
  std::map<std::pair<Phase, std::string>, std::uint64_t> hook_bytes_;
  std::vector<MessageRecord> log_[3][3];
  Digest digest_[3][3] = {};
};

Bytes encode_frame(const Bytes& payload);
/// Splits a byte stream of length-prefixed frames. Returns nullopt when a frame is incomplete.
std::optional<Bytes> decode_frame(const std::uint8_t* data, std::size_t size, std::size_t& consumed);

struct NetworkOptions {
  std::uint64_t session_id = 0;
  AdversaryConfig adversary;
  std::chrono::milliseconds timeout{300000};
  std::size_t log_limit = 4096;  // per channel
  bool hash_channels = false;
};

class Network;

/// A single party's view of the fabric. Used by one thread at a time.
class Endpoint {
 public:
  PartyId id() const { return id_; }
  Phase phase() const { return phase_; }
  void enter(Phase p);
  std::uint64_t session_id() const;
  bool corrupted() const;
  const AdversaryConfig& adversary() const;

  /// Counts, tampers (if this party is corrupted) and enqueues. Returns what was delivered,
  /// so a corrupted sender can stay consistent with the value it injected.
  Bytes send(PartyId to, std::string_view hook, Bytes payload, ByteClass cls = ByteClass::Payload, unsigned width = 64);
  /// Blocks until the next frame from `from` arrives. The frame must carry this hook and phase.
  Bytes recv(PartyId from, std::string_view hook);
  /// All three parties must call with the same label, in the same phase.
  void barrier(std::string_view label = "step");

 private:
  friend class Network;
  Endpoint(Network& net, PartyId id) : net_(net), id_(id) {}
  Network& net_;
  PartyId id_;
  Phase phase_ = Phase::Preprocessing;
  std::map<std::string, std::uint64_t, std::less<>> sent_per_hook_;
};

class Network {
 public:
  explicit Network(NetworkOptions opts);
  ~Network();
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  Endpoint& endpoint(PartyId p) { return *endpoints_[idx(p)]; }
  Transcript transcript() const;
  /// Records the first abort and wakes every blocked party.
  void abort(PartyId who, const std::string& reason);
  /// Wakes every blocked party after a harness failure.
  void fail(const std::string& reason);
  bool aborted() const;
  std::string abort_reason() const;
  std::optional<PartyId> aborted_by() const;
  const NetworkOptions& options() const { return opts_; }

 private:
  friend class Endpoint;
  struct Channel {
    Bytes stream;
    std::size_t read = 0;
    std::vector<std::pair<Phase, std::string>> meta;
    std::size_t meta_read = 0;
  };
  void throw_if_stopped() const;

  NetworkOptions opts_;
  std::array<std::unique_ptr<Endpoint>, 3> endpoints_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  Channel ch_[3][3];
  Transcript tr_;
  // barrier state
  unsigned arrived_ = 0;
  std::uint64_t generation_ = 0;
  Phase barrier_phase_{};
  std::string barrier_label_;
  bool aborted_ = false;
  bool failed_ = false;
  std::optional<PartyId> aborter_;
  std::string reason_;
};

}  // namespace ring3pc
