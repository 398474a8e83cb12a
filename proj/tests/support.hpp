#pragma once

#include <array>
#include <exception>
#include <optional>
#include <thread>
#include <utility>

#include "ring3pc/harness.hpp"
#include "ring3pc/sharing.hpp"

namespace ring3pc::test {

template <class R>
struct PartyRun {
  std::array<std::optional<R>, 3> out;
  std::array<std::exception_ptr, 3> error;
  Transcript transcript;
  bool aborted = false;
  std::string abort_reason;

  const R& at(PartyId p) const { return *out[idx(p)]; }
  bool ok() const { return out[0] && out[1] && out[2]; }
};

/// Runs f on three party threads over a fresh network. An AbortError aborts the session;
/// any other exception wakes the others and is kept for the caller.
template <class F>
auto run_parties(F f, NetworkOptions no = {}, std::uint64_t seed = 1) {
  using R = decltype(f(std::declval<Party&>()));
  Network net(no);
  auto seeds = setup_seeds(seed);
  PartyRun<R> run;
  std::array<std::thread, 3> th;
  for (auto id : kParties)
    th[idx(id)] = std::thread([&, id] {
      Party party(id, seeds[idx(id)], net.endpoint(id));
      try {
        run.out[idx(id)] = f(party);
      } catch (const AbortError& e) {
        run.error[idx(id)] = std::current_exception();
        net.abort(id, e.what());
      } catch (...) {
        run.error[idx(id)] = std::current_exception();
        net.fail("test failure");
      }
    });
  for (auto& t : th) t.join();
  run.transcript = net.transcript();
  run.aborted = net.aborted();
  run.abort_reason = net.abort_reason();
  return run;
}

/// Plain value of a masked sharing from the P1 and P2 views: m − [r]_1 − [r]_2.
template <class E>
E open(const Masked<E>& s1, const Masked<E>& s2) {
  return s1.a - s1.b - s2.b;
}

/// Honest run of a gate program; returns P1's opened outputs.
inline std::vector<RingElem> run_program(const Program& prog, SessionConfig cfg = {}) {
  auto res = run_session(cfg, prog);
  if (res.aborted) throw std::runtime_error("unexpected abort: " + res.abort_reason);
  return res.outputs[1];
}

/// Slice owned by `p` in a program: the values for the owner, empty for everyone else.
inline std::span<const RingElem> owned(const Evaluator& ev, PartyId owner, const std::vector<RingElem>& v) {
  return ev.id() == owner ? std::span<const RingElem>(v) : std::span<const RingElem>();
}

}  // namespace ring3pc::test
