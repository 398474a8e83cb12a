#include "ring3pc/harness.hpp"

#include <mutex>
#include <thread>

namespace ring3pc {

namespace {

std::vector<RingElem> open_outputs(Party& p, const std::vector<Wire>& outs) {
  std::map<unsigned, std::vector<std::size_t>> by_width;
  for (std::size_t i = 0; i < outs.size(); ++i) by_width[outs[i].a.width()].push_back(i);
  std::vector<RingElem> vals(outs.size());
  for (const auto& [ell, ids] : by_width) {
    std::vector<Wire> w;
    for (auto i : ids) w.push_back(outs[i]);
    auto v = rec(p, Zl(ell), std::span<const Wire>(w));
    for (std::size_t k = 0; k < ids.size(); ++k) vals[ids[k]] = v[k];
  }
  return vals;
}

}  // namespace

SessionResult run_session(const SessionConfig& cfg, const Program& prog) {
  NetworkOptions no;
  no.session_id = cfg.session_id;
  no.adversary = cfg.adversary;
  no.timeout = cfg.timeout;
  no.hash_channels = cfg.hash_channels;
  Network net(no);
  auto seeds = setup_seeds(cfg.seed);

  SessionResult res;
  std::mutex mu;
  std::exception_ptr harness_error;
  std::array<bool, 3> verdict{};

  auto body = [&](PartyId id) {
    Party party(id, seeds[idx(id)], net.endpoint(id));
    try {
      Evaluator ev(party);
      ev.adder = cfg.adder;
      prog(ev);
      ev.finish_prep();
      std::vector<VerifyPlan> plans;
      if (cfg.verify) plans = plan_verification(party, ev.counts(), cfg.verify_opts);
      if (id == PartyId::P0) {
        std::lock_guard lock(mu);
        res.counts = ev.counts();
        for (const auto& pl : plans) res.plans.push_back({pl.ell, pl.kind, pl.n, pl.R});
      }

      party.enter(Phase::Online);
      auto outs = prog(ev);
      ev.finish_online();

      party.enter(Phase::Postprocessing);
      bool ok = true;
      if (cfg.verify) {
        ok = run_verification(party, plans, cfg.verify_opts.d);
        verdict[idx(id)] = ok;
        if (!ok && cfg.adversary.abort_on_detect) throw AbortError("verification failed");
      } else {
        party.logs().freeze();
      }
      auto vals = open_outputs(party, outs);
      std::lock_guard lock(mu);
      res.outputs[idx(id)] = std::move(vals);
      if (cfg.keep_logs) res.logs[idx(id)] = party.logs();
    } catch (const AbortError& e) {
      net.abort(id, e.what());
      std::lock_guard lock(mu);
      if (cfg.keep_logs) res.logs[idx(id)] = party.logs();
    } catch (...) {
      net.fail("harness failure");
      std::lock_guard lock(mu);
      if (!harness_error) harness_error = std::current_exception();
    }
  };

  std::array<std::thread, 3> threads;
  for (auto p : kParties) threads[idx(p)] = std::thread(body, p);
  for (auto& t : threads) t.join();
  if (harness_error) std::rethrow_exception(harness_error);

  res.aborted = net.aborted();
  res.abort_reason = net.abort_reason();
  res.aborted_by = net.aborted_by();
  res.transcript = net.transcript();
  res.verified = cfg.verify && !res.aborted && verdict[0] && verdict[1] && verdict[2];
  if (!cfg.verify) res.verified = false;
  return res;
}

}  // namespace ring3pc
