#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace ring3pc;
using ring3pc::test::owned;
using ring3pc::test::run_parties;

namespace {

/// Party p's view of ⟨x⟩ with masks r1, r2.
Masked<RingElem> view(PartyId p, RingElem x, RingElem r1, RingElem r2) {
  const RingElem m = x + r1 + r2;
  switch (p) {
    case PartyId::P0: return {r1, r2};
    case PartyId::P1: return {m, r1};
    default: return {m, r2};
  }
}

struct PlainTriple {
  RingElem x, y, z;
};

/// Every party's MulRecords for the triples, with masks from g.
std::array<std::vector<MulRecord>, 3> share_triples(const std::vector<PlainTriple>& t, std::mt19937_64& g) {
  std::array<std::vector<MulRecord>, 3> out;
  for (const auto& tr : t) {
    const unsigned ell = tr.x.width();
    RingElem m[6];
    for (auto& v : m) v = RingElem(g(), ell);
    for (auto id : kParties)
      out[idx(id)].push_back({view(id, tr.x, m[0], m[1]), view(id, tr.y, m[2], m[3]), view(id, tr.z, m[4], m[5]), Phase::Online});
  }
  return out;
}

/// The plaintext relation held jointly by P1 and P2.
IpPlain open_ip(const IpShare& s1, const IpShare& s2) {
  IpPlain t;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    t.x.push_back(s1.x(false, i) - s1.x(true, i) - s2.x(true, i));
    t.y.push_back(s1.y(false, i) - s1.y(true, i) - s2.y(true, i));
  }
  t.z = s1.z.a - s1.z.b - s2.z.b;
  return t;
}

/// All elements of GR(2^ell, d) for small rings, as coefficient vectors.
std::vector<GrElem> all_elements(const GrRing& R) {
  std::vector<GrElem> out;
  const std::uint64_t q = std::uint64_t{1} << R.ell();
  std::uint64_t total = 1;
  for (unsigned i = 0; i < R.d(); ++i) total *= q;
  for (std::uint64_t k = 0; k < total; ++k) {
    std::vector<std::uint64_t> c(R.d());
    std::uint64_t v = k;
    for (auto& ci : c) {
      ci = v % q;
      v /= q;
    }
    out.emplace_back(R, std::move(c));
  }
  return out;
}

SessionResult run_muls(unsigned ell, std::size_t G, unsigned d, std::optional<unsigned> R, std::uint64_t seed = 1,
                       AdversaryConfig adv = {}) {
  SessionConfig cfg;
  cfg.seed = seed;
  cfg.verify_opts.d = d;
  cfg.verify_opts.R = R;
  cfg.adversary = std::move(adv);
  return run_session(cfg, [=](Evaluator& ev) {
    auto x = ev.random(ell, G), y = ev.random(ell, G);
    ev.mul(x, y);
    return std::vector<Wire>{};
  });
}

/// Programs here open nothing, so every postprocessing payload byte belongs to verification.
std::uint64_t verify_payload(const Transcript& tr) { return tr.total(Phase::Postprocessing, ByteClass::Payload); }

}  // namespace

TEST(Tran, HonestRelationHoldsForEveryChallenge) {
  const GrRing& R = GrRing::get(64, 8);
  const Zl Z(64);
  std::mt19937_64 g(1);
  auto logs = share_triples({{Z.from(1), Z.from(3), Z.from(3)}, {Z.from(2), Z.from(4), Z.from(8)}}, g);
  for (int k = 0; k < 20; ++k) {
    std::vector<std::uint64_t> c(8);
    for (auto& v : c) v = g();
    const GrElem r(R, c);
    const auto s1 = tran(PartyId::P1, R, logs[1], r), s2 = tran(PartyId::P2, R, logs[2], r);
    const auto t = open_ip(s1, s2);
    EXPECT_EQ(t.z, r * GrElem::embed(R, 3) + r * r * GrElem::embed(R, 8));
    EXPECT_TRUE(ip_defect(t).is_zero());
  }
}

TEST(Tran, ExhaustiveRootCountAtEllFourDegreeTwo) {
  // For every nonzero error pair on N = 2 triples, the relation survives for at most N/2^d of all r.
  const GrRing& R = GrRing::get(4, 2);
  const Zl Z(4);
  const auto rs = all_elements(R);
  std::mt19937_64 g(2);
  for (std::uint64_t e0 = 0; e0 < 16; ++e0)
    for (std::uint64_t e1 = 0; e1 < 16; ++e1) {
      if (e0 == 0 && e1 == 0) continue;
      auto logs = share_triples({{Z.from(5), Z.from(7), Z.from(35) + Z.from(e0)}, {Z.from(9), Z.from(2), Z.from(18) + Z.from(e1)}}, g);
      std::size_t survive = 0;
      for (const auto& r : rs) survive += ip_defect(open_ip(tran(PartyId::P1, R, logs[1], r), tran(PartyId::P2, R, logs[2], r))).is_zero();
      ASSERT_LE(survive * 4, rs.size() * 2) << e0 << "," << e1;
    }
}

TEST(Consolidate, DotsScaleByPowers) {
  const GrRing& R = GrRing::get(64, 4);
  const Zl Z(64);
  std::mt19937_64 g(3);
  std::array<std::vector<DotRecord>, 3> dots;
  // ⟨(1,2,3),(4,5,6)⟩ = 32 and ⟨(7),(8)⟩ = 56
  const std::vector<std::vector<std::uint64_t>> xs{{1, 2, 3}, {7}}, ys{{4, 5, 6}, {8}};
  const std::uint64_t zs[] = {32, 56};
  for (std::size_t j = 0; j < 2; ++j) {
    RingElem m[2];
    for (auto& v : m) v = Z.from(g());
    std::array<DotRecord, 3> rec;
    for (std::size_t i = 0; i < xs[j].size(); ++i) {
      RingElem k[4];
      for (auto& v : k) v = Z.from(g());
      for (auto id : kParties) {
        rec[idx(id)].x.push_back(view(id, Z.from(xs[j][i]), k[0], k[1]));
        rec[idx(id)].y.push_back(view(id, Z.from(ys[j][i]), k[2], k[3]));
      }
    }
    for (auto id : kParties) {
      rec[idx(id)].z = view(id, Z.from(zs[j]), m[0], m[1]);
      rec[idx(id)].phase = Phase::Online;
      dots[idx(id)].push_back(rec[idx(id)]);
    }
  }
  const GrElem r(R, {3, 1, 4, 1});
  const auto t = open_ip(consolidate(PartyId::P1, R, dots[1], r), consolidate(PartyId::P2, R, dots[2], r));
  ASSERT_EQ(t.x.size(), 4u);
  EXPECT_EQ(t.z, r * GrElem::embed(R, 32) + r * r * GrElem::embed(R, 56));
  EXPECT_TRUE(ip_defect(t).is_zero());
}

TEST(Pad, ZeroEntriesToPowerOfTwo) {
  const GrRing& R = GrRing::get(64, 2);
  const Zl Z(64);
  std::mt19937_64 g(4);
  std::vector<PlainTriple> t;
  for (int i = 0; i < 5; ++i) t.push_back({Z.from(i), Z.from(i + 1), Z.from(i * (i + 1))});
  auto logs = share_triples(t, g);
  const GrElem r(R, {5, 9});
  auto s1 = tran(PartyId::P1, R, logs[1], r), s2 = tran(PartyId::P2, R, logs[2], r);
  pad(s1, 2);
  pad(s2, 2);
  EXPECT_EQ(s1.size(), 8u);
  EXPECT_TRUE(ip_defect(open_ip(s1, s2)).is_zero());
}

TEST(ReducePlain, UnitPointsKeepAViolatedRelationWithBoundedProbability) {
  // N = 2 with a defect in z, every ζ: survival ≤ 1/2^{d−1}.
  const GrRing& R2 = GrRing::get(4, 2);
  const GrRing& R3 = GrRing::get(4, GrModulus(std::vector<std::uint8_t>{1, 1, 0, 1}));
  for (const GrRing* R : {&R2, &R3}) {
    const auto zs = all_elements(*R);
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 6; ++trial) {
      IpPlain t;
      for (int i = 0; i < 2; ++i) {
        t.x.push_back(zs[g() % zs.size()]);
        t.y.push_back(zs[g() % zs.size()]);
      }
      for (std::uint64_t e = 1; e < 16; ++e) {
        t.z = t.x[0] * t.y[0] + t.x[1] * t.y[1] + GrElem::embed(*R, e);
        std::size_t survive = 0;
        for (const auto& z : zs) survive += ip_defect(reduce_plain_unit(t, z)).is_zero();
        ASSERT_LE(survive << (R->d() - 1), zs.size()) << "d=" << R->d() << " e=" << e;
      }
    }
  }
}

TEST(ReducePlain, HonestRelationStaysTrue) {
  const GrRing& R = GrRing::get(64, 4);
  std::mt19937_64 g(6);
  auto rnd = [&] { return GrElem(R, {g(), g(), g(), g()}); };
  IpPlain t;
  for (int i = 0; i < 8; ++i) {
    t.x.push_back(rnd());
    t.y.push_back(rnd());
  }
  t.z = GrElem(R);
  for (int i = 0; i < 8; ++i) t.z += t.x[i] * t.y[i];
  for (int k = 0; k < 3; ++k) {
    t = reduce_plain_unit(t, rnd());
    ASSERT_TRUE(ip_defect(t).is_zero());
  }
  EXPECT_EQ(t.x.size(), 1u);
}

TEST(Mulv, HonestCompletenessSmallRingAllSizes) {
  for (std::size_t G = 1; G <= 64; ++G) {
    auto res = run_muls(4, G, 2, {}, G);
    ASSERT_FALSE(res.aborted) << G << ": " << res.abort_reason;
    ASSERT_TRUE(res.verified) << G;
  }
}

TEST(Mulv, HonestCompletenessFullSize) {
  std::mt19937_64 g(8);
  for (int k = 0; k < 6; ++k) {
    const std::size_t G = 1 + g() % 300;
    const unsigned R = static_cast<unsigned>(g() % (max_reductions(G) + 1));
    auto res = run_muls(64, G, 64, R, g());
    ASSERT_TRUE(res.verified) << "G=" << G << " R=" << R;
  }
}

TEST(Mulv, SingleInjectedGateAborts) {
  for (const char* hook : {"mz", "gamma"}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      AdversaryConfig adv;
      adv.corrupted = std::string(hook) == "mz" ? PartyId::P1 : PartyId::P0;
      adv.injections.push_back({hook, 0, s % 64, s == 0 ? 1 : (std::uint64_t{1} << 63), {}});
      auto res = run_muls(64, 64, 16, 2, 100 + s, adv);
      EXPECT_TRUE(res.aborted) << hook << " " << s;
      EXPECT_FALSE(res.verified);
    }
  }
}

TEST(Mulv, PayloadMatchesCostModel) {
  for (unsigned d : {2u, 16u})
    for (std::size_t G : {1u, 5u, 64u, 100u})
      for (unsigned R = 0; R <= max_reductions(G); ++R) {
        auto res = run_muls(64, G, d, R);
        ASSERT_TRUE(res.verified);
        ASSERT_EQ(res.plans.size(), 1u);
        ASSERT_EQ(res.plans[0].R, R);
        const auto c = verify_cost(G, R);
        EXPECT_EQ(verify_payload(res.transcript), (c.online_elems + c.deal_elems) * d * 8) << "G=" << G << " R=" << R;
        EXPECT_EQ(res.transcript.rounds(Phase::Postprocessing), c.online_rounds + c.deal_rounds) << "G=" << G << " R=" << R;
      }
}

TEST(Mulv, ReferenceFormula) {
  EXPECT_EQ(mulv_online_formula_bits(1024, 7, 64, 64), (5u * 7 + 3 + 8) * 64 * 64);
  EXPECT_EQ(max_reductions(1024), 10u);
  EXPECT_EQ(max_reductions(1), 0u);
}

TEST(Mulv, DegreeOneRunsWithoutReductions) {
  auto res = run_muls(64, 16, 1, 3);
  ASSERT_TRUE(res.verified);
  EXPECT_EQ(res.plans[0].R, 0u);
}

TEST(Challenges, OpeningBeforeFreezeIsHarnessError) {
  const GrRing& R = GrRing::get(64, 8);
  auto run = run_parties([&](Party& p) {
    auto ch = draw_challenges(p, R, 1);
    return open_challenge(p, R, ch.r);
  });
  EXPECT_FALSE(run.ok());
  for (auto id : kParties) {
    ASSERT_TRUE(run.error[idx(id)]);
    EXPECT_THROW(std::rethrow_exception(run.error[idx(id)]), HarnessError);
  }
}

TEST(Challenges, OpenAgreesAfterFreeze) {
  const GrRing& R = GrRing::get(64, 8);
  auto run = run_parties([&](Party& p) {
    auto ch = draw_challenges(p, R, 2);
    p.enter(Phase::Postprocessing);
    p.logs().freeze();
    return std::vector<GrElem>{open_challenge(p, R, ch.r), open_challenge(p, R, ch.zeta[1]), open_challenge(p, R, ch.alpha)};
  });
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run.at(PartyId::P0), run.at(PartyId::P1));
  EXPECT_EQ(run.at(PartyId::P1), run.at(PartyId::P2));
  EXPECT_NE(run.at(PartyId::P0)[0], run.at(PartyId::P0)[2]);
}

TEST(Vdot, EmptyRelationChecksZ) {
  const GrRing& R = GrRing::get(64, 4);
  for (std::uint64_t z : {0, 3}) {
    auto run = run_parties([&](Party& p) {
      IpShare s = tran(p.id(), R, {}, GrElem::embed(R, 1));
      if (!p.is(PartyId::P0)) s.z.a = GrElem::embed(R, z);
      p.enter(Phase::Postprocessing);
      p.logs().freeze();
      return vdot(p, s, public_share(p.id(), GrElem::embed(R, 7), GrElem(R)));
    });
    ASSERT_TRUE(run.ok());
    for (auto id : kParties) EXPECT_EQ(run.at(id), z == 0) << z;
  }
}

TEST(Vdot, ExhaustiveAlphaAtEllFourDegreeTwo) {
  // A violated relation passes for at most 2^{−d} of all α.
  const GrRing& R = GrRing::get(4, 2);
  const Zl Z(4);
  const auto as = all_elements(R);
  std::mt19937_64 g(9);
  for (std::uint64_t e : {1, 2, 8}) {
    auto logs = share_triples({{Z.from(3), Z.from(5), Z.from(15) + Z.from(e)}}, g);
    std::size_t pass = 0;
    for (const auto& a : as) {
      auto run = run_parties([&](Party& p) {
        IpShare s = tran(p.id(), R, logs[idx(p.id())], GrElem::embed(R, 1));
        p.enter(Phase::Postprocessing);
        p.logs().freeze();
        return vdot(p, s, public_share(p.id(), a, GrElem(R)));
      });
      ASSERT_TRUE(run.ok());
      pass += run.at(PartyId::P1);
    }
    EXPECT_LE(pass * 4, as.size()) << e;
  }
}

TEST(Bsv, HonestDotsAndInjectedDot) {
  std::vector<RingElem> x{RingElem(1, 64), RingElem(2, 64), RingElem(3, 64)}, y{RingElem(4, 64), RingElem(5, 64), RingElem(6, 64)};
  auto prog = [&](Evaluator& ev) {
    auto a = ev.input(PartyId::P1, 64, owned(ev, PartyId::P1, x), 3);
    auto b = ev.input(PartyId::P2, 64, owned(ev, PartyId::P2, y), 3);
    std::vector<GateTask<RingElem>> t{{a, b}, {b, a}};
    return ev.gates(64, t);
  };
  SessionConfig cfg;
  cfg.verify_opts.d = 16;
  auto res = run_session(cfg, prog);
  ASSERT_TRUE(res.verified);
  EXPECT_EQ(res.outputs[1], (std::vector<RingElem>{RingElem(32, 64), RingElem(32, 64)}));
  ASSERT_EQ(res.plans.size(), 1u);
  EXPECT_EQ(res.plans[0].kind, LogKind::Dot);
  EXPECT_EQ(res.plans[0].n, 6u);
  cfg.adversary.corrupted = PartyId::P2;
  cfg.adversary.injections.push_back({"mz", 0, 1, 1, {}});
  EXPECT_TRUE(run_session(cfg, prog).aborted);
}

TEST(Bsv, SingleLengthOneDotMatchesMulvTranscript) {
  const GrRing& R = GrRing::get(64, 8);
  const Zl Z(64);
  std::mt19937_64 g(10);
  auto logs = share_triples({{Z.from(6), Z.from(7), Z.from(42)}}, g);
  auto verify = [&](bool as_dot) {
    return run_parties([&](Party& p) {
      auto ch = draw_challenges(p, R, 0);
      p.enter(Phase::Postprocessing);
      p.logs().freeze();
      const auto& m = logs[idx(p.id())];
      if (!as_dot) return mulv(p, R, m, 0, ch);
      std::vector<DotRecord> d{{{m[0].x}, {m[0].y}, m[0].z, m[0].phase}};
      return bsv(p, R, d, 0, ch);
    });
  };
  auto a = verify(false), b = verify(true);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_TRUE(a.at(PartyId::P1));
  EXPECT_TRUE(b.at(PartyId::P1));
  EXPECT_EQ(a.transcript.csv(), b.transcript.csv());
}
