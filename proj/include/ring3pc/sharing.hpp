#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ring3pc/domain.hpp"
#include "ring3pc/errors.hpp"
#include "ring3pc/party.hpp"
#include "ring3pc/shares.hpp"

namespace ring3pc {

template <class D, class E = typename D::Elem>
Bytes serialize(const D& dom, std::span<const E> v) {
  Bytes out;
  out.reserve(v.size() * dom.elem_bytes());
  for (const auto& e : v) dom.put(out, e);
  return out;
}

template <class D, class E = typename D::Elem>
std::vector<E> deserialize(const D& dom, const Bytes& b, std::size_t n) {
  ByteReader in(b);
  std::vector<E> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(dom.get(in));
  if (!in.done()) throw HarnessError("payload longer than expected");
  return v;
}

/// Sends v, returns the delivered (possibly tampered) values.
template <class D, class E = typename D::Elem>
std::vector<E> send_elems(Party& p, PartyId to, const std::string& hook, const D& dom, std::span<const E> v) {
  Bytes got = p.net().send(to, hook, serialize(dom, v), ByteClass::Payload, dom.word_width());
  return deserialize(dom, got, v.size());
}

template <class D, class E = typename D::Elem>
std::vector<E> recv_elems(Party& p, PartyId from, const std::string& hook, const D& dom, std::size_t n) {
  return deserialize(dom, p.net().recv(from, hook), n);
}

/// [x] with x1 from η01 and x2 from η02; P0 learns x = x1 + x2. No communication.
template <class D, class E = typename D::Elem>
std::vector<Additive<E>> sha_random(Party& p, const D& dom, std::size_t n) {
  std::vector<Additive<E>> out;
  out.reserve(n);
  if (n == 0) return out;
  switch (p.id()) {
    case PartyId::P0: {
      Prg& g1 = p.stream(Pair::P01, "sha");
      Prg& g2 = p.stream(Pair::P02, "sha");
      for (std::size_t i = 0; i < n; ++i) {
        E a = dom.draw(g1);
        out.push_back({std::move(a), dom.draw(g2)});
      }
      break;
    }
    case PartyId::P1:
    case PartyId::P2: {
      Prg& g = p.stream(p.is(PartyId::P1) ? Pair::P01 : Pair::P02, "sha");
      for (std::size_t i = 0; i < n; ++i) out.push_back({dom.draw(g), dom.zero()});
      break;
    }
  }
  return out;
}

/// First half of Π_sha for dealer inputs: x1 from η01 on P0/P1; P0 computes x2 = x − x1.
/// P2's shares stay zero until the dealt values arrive.
template <class D, class E = typename D::Elem>
std::vector<Additive<E>> sha_input_local(Party& p, const D& dom, std::span<const E> x, std::size_t n, std::vector<E>* x2_out) {
  if (p.is(PartyId::P0) && x.size() != n) throw UsageError("sha_input: P0 must supply every value");
  std::vector<Additive<E>> out;
  out.reserve(n);
  if (p.is(PartyId::P2)) {
    out.assign(n, Additive<E>{dom.zero(), dom.zero()});
    return out;
  }
  if (n == 0) return out;
  Prg& g = p.stream(Pair::P01, "sha.in");
  for (std::size_t i = 0; i < n; ++i) {
    E x1 = dom.draw(g);
    if (p.is(PartyId::P0)) {
      E x2 = x[i] - x1;
      if (x2_out) x2_out->push_back(x2);
      out.push_back({std::move(x1), std::move(x2)});
    } else {
      out.push_back({std::move(x1), dom.zero()});
    }
  }
  return out;
}

/// Π_sha(x) with dealer P0: P0 sends x2 = x − x1 to P2. Ends with a barrier.
template <class D, class E = typename D::Elem>
std::vector<Additive<E>> sha_input(Party& p, const D& dom, std::span<const E> x, std::size_t n, const std::string& hook,
                                   bool barrier = true) {
  std::vector<E> x2;
  auto out = sha_input_local(p, dom, x, n, &x2);
  if (p.is(PartyId::P0)) {
    auto got = send_elems(p, PartyId::P2, hook, dom, std::span<const E>(x2));
    for (std::size_t i = 0; i < n; ++i) out[i].b = got[i];
  } else if (p.is(PartyId::P2)) {
    auto got = recv_elems(p, PartyId::P0, hook, dom, n);
    for (std::size_t i = 0; i < n; ++i) out[i].a = got[i];
  }
  if (barrier) p.net().barrier("deal");
  return out;
}

/// ⟨x⟩ with masks from sha_random and m from η12. No communication.
template <class D, class E = typename D::Elem>
std::vector<Masked<E>> shc_random(Party& p, const D& dom, std::size_t n) {
  auto r = sha_random(p, dom, n);
  std::vector<Masked<E>> out;
  out.reserve(n);
  Prg* g = p.is(PartyId::P0) || n == 0 ? nullptr : &p.stream(Pair::P12, "shc");
  for (std::size_t i = 0; i < n; ++i) out.push_back(from_mask(p.id(), r[i], g ? dom.draw(*g) : dom.zero()));
  return out;
}

/// Preprocessing half of Π_shc^k: masks drawn only from seeds the owner holds, so the
/// owner knows r. Owner P1 uses [r]_2 = 0 and owner P2 uses [r]_1 = 0.
template <class D, class E = typename D::Elem>
std::vector<Masked<E>> shc_mask(Party& p, const D& dom, PartyId owner, std::size_t n) {
  if (owner == PartyId::P0) {
    auto r = sha_random(p, dom, n);
    std::vector<Masked<E>> out;
    for (auto& s : r) out.push_back(from_mask(p.id(), s, dom.zero()));
    return out;
  }
  Pair s = owner == PartyId::P1 ? Pair::P01 : Pair::P02;
  std::vector<Masked<E>> out;
  out.reserve(n);
  Prg* g = holds(p.id(), s) && n > 0 ? &p.stream(s, "shc.in") : nullptr;
  for (std::size_t i = 0; i < n; ++i) {
    E r = g ? dom.draw(*g) : dom.zero();
    if (p.is(PartyId::P0))
      out.push_back(owner == PartyId::P1 ? Masked<E>{r, dom.zero()} : Masked<E>{dom.zero(), r});
    else
      out.push_back({dom.zero(), p.is(owner) ? r : dom.zero()});
  }
  return out;
}

/// Online half of Π_shc^k: the owner sends m = x + r to whichever of P1, P2 it is not.
template <class D, class E = typename D::Elem>
void shc_send(Party& p, const D& dom, PartyId owner, std::vector<Masked<E>>& io, std::span<const E> x,
              const std::string& hook = "shc.m") {
  std::size_t n = io.size();
  std::vector<E> m;
  if (p.is(owner)) {
    if (x.size() != n) throw UsageError("shc_input: owner must supply every value");
    m.reserve(n);
    for (std::size_t i = 0; i < n; ++i) m.push_back(x[i] + (p.is(PartyId::P0) ? io[i].a + io[i].b : io[i].b));
  }
  auto deliver = [&](PartyId to) { return send_elems(p, to, hook, dom, std::span<const E>(m)); };
  if (owner == PartyId::P0) {
    if (p.is(PartyId::P0)) {
      deliver(PartyId::P1);
      deliver(PartyId::P2);
    } else {
      auto got = recv_elems(p, PartyId::P0, hook, dom, n);
      for (std::size_t i = 0; i < n; ++i) io[i].a = got[i];
    }
  } else if (p.is(owner)) {
    PartyId other = owner == PartyId::P1 ? PartyId::P2 : PartyId::P1;
    auto got = deliver(other);
    for (std::size_t i = 0; i < n; ++i) io[i].a = got[i];
  } else if (!p.is(PartyId::P0)) {
    auto got = recv_elems(p, owner, hook, dom, n);
    for (std::size_t i = 0; i < n; ++i) io[i].a = got[i];
  }
  p.net().barrier("input");
}

template <class D, class E = typename D::Elem>
std::vector<Masked<E>> shc_input(Party& p, const D& dom, PartyId owner, std::span<const E> x, std::size_t n) {
  auto io = shc_mask(p, dom, owner, n);
  shc_send(p, dom, owner, io, x);
  return io;
}

/// SHA-256(session ‖ rec-id ‖ component ‖ payload).
Digest rec_digest(std::uint64_t session, std::uint64_t rec_id, char component, const Bytes& payload);

namespace detail {
inline Bytes digest_bytes(const Digest& d) { return Bytes(d.begin(), d.end()); }
}  // namespace detail

/// Π_rec: every party outputs x = m − r1 − r2. Batched values share one digest per message.
template <class D, class E = typename D::Elem>
std::vector<E> rec(Party& p, const D& dom, std::span<const Masked<E>> xs) {
  const std::uint64_t sid = p.session_id(), id = p.next_rec_id();
  const std::size_t n = xs.size();
  auto column = [&](bool first) {
    std::vector<E> v;
    v.reserve(n);
    for (const auto& s : xs) v.push_back(first ? s.a : s.b);
    return v;
  };
  auto check = [&](const Bytes& got, char comp, const Bytes& digest, const char* what) {
    if (detail::digest_bytes(rec_digest(sid, id, comp, got)) != digest) throw AbortError(std::string("rec: ") + what);
  };
  std::vector<E> m, r1, r2;
  Endpoint& ep = p.net();
  switch (p.id()) {
    case PartyId::P0: {
      r1 = column(true);
      r2 = column(false);
      ep.send(PartyId::P2, "rec.r1", serialize(dom, std::span<const E>(r1)), ByteClass::Payload, dom.word_width());
      ep.send(PartyId::P1, "rec.r2", serialize(dom, std::span<const E>(r2)), ByteClass::Payload, dom.word_width());
      Bytes mb = ep.recv(PartyId::P1, "rec.m");
      Bytes h = ep.recv(PartyId::P2, "rec.hm");
      check(mb, 'm', h, "m from P1 disagrees with the digest from P2 (channels P1->P0, P2->P0)");
      m = deserialize(dom, mb, n);
      break;
    }
    case PartyId::P1: {
      m = column(true);
      r1 = column(false);
      Bytes mb = ep.send(PartyId::P0, "rec.m", serialize(dom, std::span<const E>(m)), ByteClass::Payload, dom.word_width());
      ep.send(PartyId::P2, "rec.hr1", detail::digest_bytes(rec_digest(sid, id, '1', serialize(dom, std::span<const E>(r1)))),
              ByteClass::Digest);
      Bytes rb = ep.recv(PartyId::P0, "rec.r2");
      Bytes h = ep.recv(PartyId::P2, "rec.hr2");
      check(rb, '2', h, "r2 from P0 disagrees with the digest from P2 (channels P0->P1, P2->P1)");
      r2 = deserialize(dom, rb, n);
      break;
    }
    case PartyId::P2: {
      m = column(true);
      r2 = column(false);
      ep.send(PartyId::P0, "rec.hm", detail::digest_bytes(rec_digest(sid, id, 'm', serialize(dom, std::span<const E>(m)))),
              ByteClass::Digest);
      ep.send(PartyId::P1, "rec.hr2", detail::digest_bytes(rec_digest(sid, id, '2', serialize(dom, std::span<const E>(r2)))),
              ByteClass::Digest);
      Bytes rb = ep.recv(PartyId::P0, "rec.r1");
      Bytes h = ep.recv(PartyId::P1, "rec.hr1");
      check(rb, '1', h, "r1 from P0 disagrees with the digest from P1 (channels P0->P2, P1->P2)");
      r1 = deserialize(dom, rb, n);
      break;
    }
  }
  ep.barrier("rec");
  std::vector<E> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(m[i] - r1[i] - r2[i]);
  return out;
}

/// Reconstruction towards one party: the two others send the missing component and its digest.
template <class D, class E = typename D::Elem>
std::optional<std::vector<E>> rec_to(Party& p, const D& dom, PartyId k, std::span<const Masked<E>> xs) {
  const std::uint64_t sid = p.session_id(), id = p.next_rec_id();
  const std::size_t n = xs.size();
  Endpoint& ep = p.net();
  // Component k is missing at P_k: P0 lacks m, P1 lacks r2, P2 lacks r1.
  const char comp = k == PartyId::P0 ? 'm' : k == PartyId::P1 ? '2' : '1';
  // (sender of the value, sender of the digest)
  PartyId vs = k == PartyId::P0 ? PartyId::P1 : PartyId::P0;
  PartyId hs = k == PartyId::P2 ? PartyId::P1 : PartyId::P2;
  auto missing = [&]() {
    std::vector<E> v;
    v.reserve(n);
    for (const auto& s : xs) {
      if (k == PartyId::P0) v.push_back(s.a);  // m at P1/P2
      else if (p.is(PartyId::P0)) v.push_back(k == PartyId::P1 ? s.b : s.a);
      else v.push_back(s.b);                    // own r-share
    }
    return v;
  };
  std::optional<std::vector<E>> out;
  if (p.is(vs)) {
    ep.send(k, "recto.v", serialize(dom, std::span<const E>(missing())), ByteClass::Payload, dom.word_width());
  } else if (p.is(hs)) {
    ep.send(k, "recto.h", detail::digest_bytes(rec_digest(sid, id, comp, serialize(dom, std::span<const E>(missing())))),
            ByteClass::Digest);
  } else {
    Bytes vb = ep.recv(vs, "recto.v");
    Bytes h = ep.recv(hs, "recto.h");
    if (detail::digest_bytes(rec_digest(sid, id, comp, vb)) != h)
      throw AbortError("rec_to: value from " + to_string(vs) + " disagrees with the digest from " + to_string(hs));
    auto got = deserialize(dom, vb, n);
    std::vector<E> v;
    v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = xs[i];
      if (k == PartyId::P0) v.push_back(got[i] - s.a - s.b);
      else if (k == PartyId::P1) v.push_back(s.a - s.b - got[i]);
      else v.push_back(s.a - got[i] - s.b);
    }
    out = std::move(v);
  }
  ep.barrier("rec");
  return out;
}

/// P1 and P2 swap their additive shares of m_z and both set m_z = [m_z]_1 + [m_z]_2.
/// P0 returns an empty vector.
template <class D, class E = typename D::Elem>
std::vector<E> exchange_mz(Party& p, const D& dom, const std::vector<E>& mine, const std::string& hook) {
  std::vector<E> out;
  if (p.is(PartyId::P0)) {
    p.net().barrier("exchange");
    return out;
  }
  PartyId other = p.is(PartyId::P1) ? PartyId::P2 : PartyId::P1;
  auto sent = send_elems(p, other, hook, dom, std::span<const E>(mine));
  auto got = recv_elems(p, other, hook, dom, mine.size());
  p.net().barrier("exchange");
  out.reserve(mine.size());
  for (std::size_t i = 0; i < mine.size(); ++i) out.push_back(sent[i] + got[i]);
  return out;
}

/// Debug dump, one line per share: gate_id, kind(ADD|MASK), ring, local fields in hex.
std::string dump_line(std::uint64_t gate_id, bool masked, const std::string& ring, const std::vector<std::uint64_t>& fields,
                      unsigned width);

}  // namespace ring3pc
