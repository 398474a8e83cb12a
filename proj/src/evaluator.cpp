#include "ring3pc/evaluator.hpp"

#include "ring3pc/nonlinear.hpp"

namespace ring3pc {

RingElem Evaluator::pop() {
  if (cursor_ >= tape_.size()) throw HarnessError("online pass ran past the preprocessing tape");
  return tape_[cursor_++];
}

void Evaluator::count(unsigned ell, std::span<const GateTask<RingElem>> tasks) {
  auto& c = counts_[ell];
  for (const auto& t : tasks) {
    if (t.x.size() == 1) {
      ++c.muls;
    } else {
      ++c.dots;
      c.dot_terms += t.x.size();
    }
  }
}

void Evaluator::finish_prep() {
  if (mode_ != Mode::Prep) throw UsageError("finish_prep outside the prep pass");
  bool any = false;
  for (const auto& [ell, n] : deferred_n_) {
    if (n == 0) continue;
    any = true;
    const Zl dom(ell);
    if (p_.is(PartyId::P0)) {
      send_elems(p_, PartyId::P2, "gamma", dom, std::span<const RingElem>(deferred_x2_[ell]));
    } else if (p_.is(PartyId::P2)) {
      auto got = recv_elems(p_, PartyId::P0, "gamma", dom, n);
      const auto& at = deferred_at_[ell];
      for (std::size_t i = 0; i < n; ++i) tape_[at[i]] = got[i];
    }
  }
  if (any) p_.net().barrier("deal");
  deferred_x2_.clear();
  deferred_at_.clear();
  // Eagerly generated gates were logged during the pass; add them to the deferred ones.
  for (const auto& [ell, log] : p_.logs().all()) {
    auto& c = counts_[ell];
    c.muls += log.muls.size();
    c.dots += log.dots.size();
    for (const auto& d : log.dots) c.dot_terms += d.x.size();
  }
  mode_ = Mode::Online;
  cursor_ = eda_cursor_ = da_cursor_ = 0;
}

void Evaluator::finish_online() {
  if (mode_ != Mode::Online) throw UsageError("finish_online outside the online pass");
  if (cursor_ != tape_.size() || eda_cursor_ != eda_.size() || da_cursor_ != da_.size())
    throw HarnessError("online pass did not consume the preprocessing tape");
  mode_ = Mode::Done;
  tape_.clear();
  tape_.shrink_to_fit();
  eda_.clear();
  da_.clear();
}

std::vector<Wire> Evaluator::random(unsigned ell, std::size_t n) {
  std::vector<Wire> out;
  if (prep()) {
    out = shc_random(p_, Zl(ell), n);
    for (const auto& w : out) {
      push(w.a);
      push(w.b);
    }
    return out;
  }
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RingElem a = pop();
    out.push_back({a, pop()});
  }
  return out;
}

std::vector<Wire> Evaluator::input(PartyId owner, unsigned ell, std::span<const RingElem> x, std::size_t n) {
  const Zl dom(ell);
  if (prep()) {
    auto out = shc_mask(p_, dom, owner, n);
    for (const auto& w : out) {
      push(w.a);
      push(w.b);
    }
    return out;
  }
  std::vector<Wire> io;
  io.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RingElem a = pop();
    io.push_back({a, pop()});
  }
  shc_send(p_, dom, owner, io, x);
  return io;
}

std::vector<Wire> Evaluator::gates(unsigned ell, std::span<const GateTask<RingElem>> tasks, std::optional<unsigned> trunc,
                                   std::vector<Wire>* pre_trunc) {
  const Zl dom(ell);
  const RingElem zero = dom.zero();
  const std::size_t n = tasks.size();
  const PartyId me = p_.id();
  std::vector<Wire> out;
  out.reserve(n);
  if (n == 0) return out;
  for (const auto& t : tasks)
    for (std::size_t i = 0; i < t.x.size(); ++i)
      if (t.x[i].a.width() != ell || t.y[i].a.width() != ell) throw UsageError("gate operand width mismatch");

  if (prep()) {
    count(ell, tasks);
    std::vector<Additive<RingElem>> rz, tz;
    if (trunc) {
      for (auto& pr : trunc_pairs(p_, ell, *trunc, n)) {
        rz.push_back(pr.rx);
        tz.push_back(pr.rz);
      }
    } else {
      rz = sha_random(p_, dom, n);
    }
    std::vector<RingElem> gamma;
    if (me == PartyId::P0) {
      gamma.reserve(n);
      for (std::size_t i = 0; i < n; ++i) gamma.push_back(gate_gamma(tasks[i], rz[i]));
    }
    auto& x2 = deferred_x2_[ell];
    auto g = sha_input_local(p_, dom, std::span<const RingElem>(gamma), n, me == PartyId::P0 ? &x2 : nullptr);
    deferred_n_[ell] += n;
    for (std::size_t i = 0; i < n; ++i) {
      if (me == PartyId::P0) {
        push(rz[i].a);
        push(rz[i].b);
      } else {
        push(rz[i].a);
        if (me == PartyId::P2) deferred_at_[ell].push_back(tape_.size());
        push(g[i].a);
      }
      if (trunc) {
        push(tz[i].a);
        if (me == PartyId::P0) push(tz[i].b);
      }
      out.push_back(from_mask(me, trunc ? tz[i] : rz[i], zero));
      if (pre_trunc) pre_trunc->push_back(from_mask(me, rz[i], zero));
    }
    return out;
  }

  std::vector<Additive<RingElem>> rz(n), tz(trunc ? n : 0);
  std::vector<RingElem> s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (me == PartyId::P0) {
      RingElem a = pop();
      rz[i] = {a, pop()};
    } else {
      rz[i] = {pop(), zero};
      s.push_back(gate_mz_share(me, tasks[i], pop()));
    }
    if (trunc) {
      RingElem a = pop();
      tz[i] = {a, me == PartyId::P0 ? pop() : zero};
    }
  }
  auto mz = exchange_mz(p_, dom, s, "mz");
  std::vector<Wire> z;
  z.reserve(n);
  for (std::size_t i = 0; i < n; ++i) z.push_back(from_mask(me, rz[i], me == PartyId::P0 ? zero : mz[i]));
  log_gates(p_, ell, tasks, z);
  if (!trunc) return z;
  if (pre_trunc) *pre_trunc = z;
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(from_mask(me, tz[i], me == PartyId::P0 ? zero : mz[i].ashr(*trunc)));
  return out;
}

std::vector<Wire> Evaluator::mul(std::span<const Wire> x, std::span<const Wire> y) {
  if (x.size() != y.size()) throw UsageError("mul: length mismatch");
  if (x.empty()) return {};
  std::vector<GateTask<RingElem>> tasks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) tasks[i] = {{x[i]}, {y[i]}};
  return gates(x[0].a.width(), tasks);
}

std::vector<Wire> Evaluator::trunc(std::span<const Wire> x, unsigned t) {
  if (x.empty()) return {};
  const unsigned ell = x[0].a.width();
  const Wire one = constant(ell, 1);
  std::vector<GateTask<RingElem>> tasks(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) tasks[i] = {{x[i]}, {one}};
  return gates(ell, tasks, t);
}

std::vector<RingElem> Evaluator::reveal(std::span<const Wire> x) {
  if (x.empty()) return {};
  const unsigned ell = x[0].a.width();
  if (prep()) return std::vector<RingElem>(x.size(), RingElem(0, ell));
  return rec(p_, Zl(ell), x);
}

std::vector<EdaBit> Evaluator::edabits(unsigned ell, std::size_t n) {
  if (prep()) {
    auto out = edabits_gen(p_, ell, n);
    eda_.insert(eda_.end(), out.begin(), out.end());
    return out;
  }
  if (eda_cursor_ + n > eda_.size()) throw HarnessError("online pass ran past the edaBits tape");
  std::vector<EdaBit> out(eda_.begin() + eda_cursor_, eda_.begin() + eda_cursor_ + n);
  eda_cursor_ += n;
  return out;
}

std::vector<DaBit> Evaluator::dabits(unsigned ell, std::size_t n) {
  if (prep()) {
    auto out = dabits_gen(p_, ell, n);
    da_.insert(da_.end(), out.begin(), out.end());
    return out;
  }
  if (da_cursor_ + n > da_.size()) throw HarnessError("online pass ran past the daBits tape");
  std::vector<DaBit> out(da_.begin() + da_cursor_, da_.begin() + da_cursor_ + n);
  da_cursor_ += n;
  return out;
}

}  // namespace ring3pc
