#include "ring3pc/transport.hpp"

#include <sstream>

#include "ring3pc/errors.hpp"

namespace ring3pc {

std::string to_string(PartyId p) { return "P" + std::to_string(idx(p)); }

PartyId party_from_string(std::string_view s) {
  if (s == "P0" || s == "0") return PartyId::P0;
  if (s == "P1" || s == "1") return PartyId::P1;
  if (s == "P2" || s == "2") return PartyId::P2;
  throw ConfigError("unknown party '" + std::string(s) + "'");
}

std::string to_string(Phase p) {
  switch (p) {
    case Phase::Preprocessing: return "Preprocessing";
    case Phase::Online: return "Online";
    case Phase::Postprocessing: return "Postprocessing";
  }
  return "?";
}

std::uint64_t Transcript::total(Phase ph, ByteClass c) const {
  std::uint64_t t = 0;
  for (auto f : kParties)
    for (auto to : kParties) t += bytes(f, to, ph, c);
  return t;
}

std::uint64_t Transcript::rounds(Phase ph, const std::string& label) const {
  auto it = round_labels_.find({ph, label});
  return it == round_labels_.end() ? 0 : it->second;
}

std::uint64_t Transcript::hook_bytes(Phase ph, const std::string& hook) const {
  auto it = hook_bytes_.find({ph, hook});
  return it == hook_bytes_.end() ? 0 : it->second;
}

std::string Transcript::csv() const {
  std::ostringstream os;
  os << "from,to,phase,bytes,rounds\n";
  for (auto ph : kPhases)
    for (auto f : kParties)
      for (auto t : kParties)
        if (f != t) os << to_string(f) << ',' << to_string(t) << ',' << to_string(ph) << ',' << bytes(f, t, ph) << ',' << rounds(ph) << '\n';
  return os.str();
}

std::string Transcript::accounting_csv() const {
  std::ostringstream os;
  os << "from,to,phase,payload_bytes,digest_bytes\n";
  for (auto ph : kPhases)
    for (auto f : kParties)
      for (auto t : kParties)
        if (f != t)
          os << to_string(f) << ',' << to_string(t) << ',' << to_string(ph) << ',' << bytes(f, t, ph, ByteClass::Payload) << ','
             << bytes(f, t, ph, ByteClass::Digest) << '\n';
  return os.str();
}

bool Transcript::operator==(const Transcript& o) const {
  for (unsigned f = 0; f < 3; ++f)
    for (unsigned t = 0; t < 3; ++t) {
      for (unsigned p = 0; p < 3; ++p)
        for (unsigned c = 0; c < 2; ++c)
          if (bytes_[f][t][p][c] != o.bytes_[f][t][p][c]) return false;
      if (digest_[f][t] != o.digest_[f][t]) return false;
      const auto& a = log_[f][t];
      const auto& b = o.log_[f][t];
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].phase != b[i].phase || a[i].hook != b[i].hook || a[i].cls != b[i].cls || a[i].bytes != b[i].bytes ||
            a[i].tampered != b[i].tampered)
          return false;
    }
  for (unsigned p = 0; p < 3; ++p)
    if (rounds_[p] != o.rounds_[p]) return false;
  return round_labels_ == o.round_labels_ && hook_bytes_ == o.hook_bytes_;
}

Bytes encode_frame(const Bytes& payload) {
  if (payload.size() > 0xffffffffu) throw HarnessError("frame too large");
  Bytes out;
  out.reserve(payload.size() + 4);
  put_word(out, payload.size(), 32);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

std::optional<Bytes> decode_frame(const std::uint8_t* data, std::size_t size, std::size_t& consumed) {
  consumed = 0;
  if (size < 4) return std::nullopt;
  std::size_t n = get_word(data, 32);
  if (size < 4 + n) return std::nullopt;
  consumed = 4 + n;
  return Bytes(data + 4, data + 4 + n);
}

Network::Network(NetworkOptions opts) : opts_(std::move(opts)) {
  for (auto p : kParties) endpoints_[idx(p)].reset(new Endpoint(*this, p));
}

Network::~Network() = default;

Transcript Network::transcript() const {
  std::lock_guard lock(mu_);
  return tr_;
}

void Network::abort(PartyId who, const std::string& reason) {
  std::lock_guard lock(mu_);
  if (!aborted_ && !failed_) {
    aborted_ = true;
    aborter_ = who;
    reason_ = reason;
  }
  cv_.notify_all();
}

void Network::fail(const std::string& reason) {
  std::lock_guard lock(mu_);
  if (!aborted_ && !failed_) {
    failed_ = true;
    reason_ = reason;
  }
  cv_.notify_all();
}

bool Network::aborted() const {
  std::lock_guard lock(mu_);
  return aborted_;
}

std::string Network::abort_reason() const {
  std::lock_guard lock(mu_);
  return reason_;
}

std::optional<PartyId> Network::aborted_by() const {
  std::lock_guard lock(mu_);
  return aborter_;
}

void Network::throw_if_stopped() const {
  if (failed_) throw HarnessError("session stopped: " + reason_);
  if (aborted_) throw AbortError("session aborted by " + to_string(*aborter_) + ": " + reason_);
}

void Endpoint::enter(Phase p) {
  if (p < phase_) throw HarnessError("phase may not move backwards");
  phase_ = p;
}

std::uint64_t Endpoint::session_id() const { return net_.opts_.session_id; }
bool Endpoint::corrupted() const { return net_.opts_.adversary.corrupted == id_; }
const AdversaryConfig& Endpoint::adversary() const { return net_.opts_.adversary; }

Bytes Endpoint::send(PartyId to, std::string_view hook, Bytes payload, ByteClass cls, unsigned width) {
  if (to == id_) throw HarnessError("party sends to itself");
  std::uint64_t occurrence = sent_per_hook_[std::string(hook)]++;
  std::uint64_t counted = payload.size();
  bool tampered = false;
  if (corrupted()) {
    for (const auto& inj : net_.opts_.adversary.injections) {
      if (inj.hook != hook || (inj.occurrence && *inj.occurrence != occurrence)) continue;
      if (inj.tamper) {
        inj.tamper(payload);
        tampered = true;
        continue;
      }
      std::size_t wb = wire_bytes(width);
      if ((inj.word + 1) * wb > payload.size()) {
        // A wildcard injection skips shorter messages; a targeted one must land.
        if (!inj.occurrence) continue;
        throw HarnessError("injection " + inj.hook + "#" + std::to_string(inj.word) + " is past the end of a " +
                           std::to_string(payload.size() / wb) + "-word message");
      }
      tampered = true;
      std::uint8_t* p = payload.data() + inj.word * wb;
      std::uint64_t v = (get_word(p, width) + inj.error) & width_mask(width);
      for (std::size_t i = 0; i < wb; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
    }
  }
  Bytes frame = encode_frame(payload);
  std::lock_guard lock(net_.mu_);
  net_.throw_if_stopped();
  auto& tr = net_.tr_;
  unsigned f = idx(id_), t = idx(to), ph = static_cast<unsigned>(phase_);
  tr.bytes_[f][t][ph][static_cast<unsigned>(cls)] += counted;
  if (cls == ByteClass::Payload) tr.hook_bytes_[{phase_, std::string(hook)}] += counted;
  if (tr.log_[f][t].size() < net_.opts_.log_limit) tr.log_[f][t].push_back({phase_, std::string(hook), cls, counted, tampered});
  if (net_.opts_.hash_channels) {
    Hasher h;
    h.update(tr.digest_[f][t].data(), 32).update(frame);
    tr.digest_[f][t] = h.finish();
  }
  auto& ch = net_.ch_[f][t];
  ch.stream.insert(ch.stream.end(), frame.begin(), frame.end());
  ch.meta.emplace_back(phase_, std::string(hook));
  net_.cv_.notify_all();
  return payload;
}

Bytes Endpoint::recv(PartyId from, std::string_view hook) {
  std::unique_lock lock(net_.mu_);
  auto& ch = net_.ch_[idx(from)][idx(id_)];
  auto deadline = std::chrono::steady_clock::now() + net_.opts_.timeout;
  for (;;) {
    net_.throw_if_stopped();
    if (ch.meta_read < ch.meta.size()) break;
    if (net_.cv_.wait_until(lock, deadline) == std::cv_status::timeout && ch.meta_read == ch.meta.size()) {
      net_.failed_ = true;
      net_.reason_ = "deadlock: " + to_string(id_) + " waiting for '" + std::string(hook) + "' from " + to_string(from);
      net_.cv_.notify_all();
      throw HarnessError(net_.reason_);
    }
  }
  auto [ph, h] = ch.meta[ch.meta_read];
  if (ph != phase_ || h != hook)
    throw HarnessError("desynchronised channel: " + to_string(id_) + " expected '" + std::string(hook) + "' in " +
                       to_string(phase_) + " but got '" + h + "' in " + to_string(ph));
  ++ch.meta_read;
  std::size_t used = 0;
  auto payload = decode_frame(ch.stream.data() + ch.read, ch.stream.size() - ch.read, used);
  if (!payload) throw HarnessError("truncated frame");
  ch.read += used;
  if (ch.read == ch.stream.size()) {
    ch.stream.clear();
    ch.read = 0;
  }
  return std::move(*payload);
}

void Endpoint::barrier(std::string_view label) {
  std::unique_lock lock(net_.mu_);
  net_.throw_if_stopped();
  if (net_.arrived_ == 0) {
    net_.barrier_phase_ = phase_;
    net_.barrier_label_ = label;
  } else if (net_.barrier_phase_ != phase_ || net_.barrier_label_ != label) {
    net_.failed_ = true;
    net_.reason_ = "barrier mismatch: " + to_string(id_) + " at '" + std::string(label) + "' in " + to_string(phase_) +
                   ", others at '" + net_.barrier_label_ + "' in " + to_string(net_.barrier_phase_);
    net_.cv_.notify_all();
    throw HarnessError(net_.reason_);
  }
  std::uint64_t gen = net_.generation_;
  if (++net_.arrived_ == 3) {
    net_.arrived_ = 0;
    ++net_.generation_;
    ++net_.tr_.rounds_[static_cast<unsigned>(phase_)];
    ++net_.tr_.round_labels_[{phase_, std::string(label)}];
    net_.cv_.notify_all();
    return;
  }
  auto deadline = std::chrono::steady_clock::now() + net_.opts_.timeout;
  while (net_.generation_ == gen) {
    net_.throw_if_stopped();
    if (net_.cv_.wait_until(lock, deadline) == std::cv_status::timeout && net_.generation_ == gen) {
      net_.failed_ = true;
      net_.reason_ = "deadlock: " + to_string(id_) + " stuck at barrier '" + std::string(label) + "'";
      net_.cv_.notify_all();
      throw HarnessError(net_.reason_);
    }
  }
}

}  // namespace ring3pc
