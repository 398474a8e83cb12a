#include "ring3pc/party.hpp"

#include <cstring>

#include "ring3pc/errors.hpp"

namespace ring3pc {

bool holds(PartyId p, Pair s) {
  switch (s) {
    case Pair::P01: return p != PartyId::P2;
    case Pair::P02: return p != PartyId::P1;
    case Pair::P12: return p != PartyId::P0;
  }
  return false;
}

Pair pair_of(PartyId a, PartyId b) {
  if (a == b) throw UsageError("pair_of needs two distinct parties");
  unsigned missing = 3 - idx(a) - idx(b);
  return missing == 2 ? Pair::P01 : missing == 1 ? Pair::P02 : Pair::P12;
}

std::array<SeedSet, 3> setup_seeds(std::uint64_t master) {
  static const char* labels[3] = {"eta01", "eta02", "eta12"};
  std::array<Seed, 3> eta;
  for (unsigned s = 0; s < 3; ++s) {
    Hasher h;
    h.update_u64(master).update(reinterpret_cast<const std::uint8_t*>(labels[s]), std::strlen(labels[s]));
    Digest d = h.finish();
    std::memcpy(eta[s].data(), d.data(), 16);
  }
  std::array<SeedSet, 3> out;
  for (auto p : kParties)
    for (unsigned s = 0; s < 3; ++s)
      if (holds(p, static_cast<Pair>(s))) out[idx(p)].seeds[s] = eta[s];
  return out;
}

Party::Party(PartyId id, SeedSet seeds, Endpoint& ep) : id_(id), seeds_(seeds), ep_(ep) {
  for (unsigned s = 0; s < 3; ++s)
    if (seeds_.seeds[s].has_value() != holds(id, static_cast<Pair>(s)))
      throw UsageError("seed set does not match the party role");
}

Prg& Party::stream(Pair s, const std::string& label) {
  if (!seeds_.has(s)) throw CapabilityError(to_string(id_) + " does not hold this seed");
  auto key = std::make_pair(static_cast<unsigned>(s), label);
  auto it = streams_.find(key);
  if (it == streams_.end()) it = streams_.emplace(key, Prg(*seeds_.seeds[static_cast<unsigned>(s)], tag_of(label))).first;
  return it->second;
}

void GateLogs::add_mul(unsigned ell, MulRecord r) {
  if (frozen_) throw HarnessError("gate log is frozen");
  auto& l = logs_[ell];
  l.ell = ell;
  l.muls.push_back(std::move(r));
}

void GateLogs::add_dot(unsigned ell, DotRecord r) {
  if (frozen_) throw HarnessError("gate log is frozen");
  auto& l = logs_[ell];
  l.ell = ell;
  l.dots.push_back(std::move(r));
}

const TripleLog* GateLogs::find(unsigned ell) const {
  auto it = logs_.find(ell);
  return it == logs_.end() ? nullptr : &it->second;
}

std::size_t GateLogs::mul_count(unsigned ell) const {
  auto* l = find(ell);
  return l ? l->muls.size() : 0;
}

std::size_t GateLogs::dot_count(unsigned ell) const {
  auto* l = find(ell);
  return l ? l->dots.size() : 0;
}

std::size_t GateLogs::dot_terms(unsigned ell) const {
  auto* l = find(ell);
  std::size_t n = 0;
  if (l)
    for (auto& d : l->dots) n += d.x.size();
  return n;
}

void GateLogs::clear() {
  logs_.clear();
  frozen_ = false;
}

}  // namespace ring3pc
