#include <gtest/gtest.h>

#include <cmath>

#include "ring3pc/fixed.hpp"
#include "support.hpp"

using namespace ring3pc;
using ring3pc::test::open;
using ring3pc::test::run_parties;

namespace {

const Zl Z64(64);

/// Three parties built on one thread for protocols that never communicate.
struct LocalTrio {
  Network net{NetworkOptions{}};
  std::array<SeedSet, 3> seeds;
  std::vector<std::unique_ptr<Party>> p;
  explicit LocalTrio(std::uint64_t seed) : seeds(setup_seeds(seed)) {
    for (auto id : kParties) p.push_back(std::make_unique<Party>(id, seeds[idx(id)], net.endpoint(id)));
  }
  Party& operator[](PartyId id) { return *p[idx(id)]; }
};

}  // namespace

TEST(Prg, AesCounterVector) {
  // AES-128 with the zero key on the zero block is 66e94bd4ef8a2c3b884cfa59ca342b2e.
  Prg g(Seed{}, 0);
  EXPECT_EQ(g.next_u64(), 0x3b2c8aefd44be966ULL);
  EXPECT_EQ(g.next_u64(), 0x2e2b34ca59fa4c88ULL);
}

TEST(Seeds, HoldersShareStreamsAndOthersCannotDraw) {
  LocalTrio t(1);
  EXPECT_EQ(t[PartyId::P0].stream(Pair::P01, "x").next_u64(), t[PartyId::P1].stream(Pair::P01, "x").next_u64());
  EXPECT_EQ(t[PartyId::P1].stream(Pair::P12, "x").next_u64(), t[PartyId::P2].stream(Pair::P12, "x").next_u64());
  EXPECT_NE(t[PartyId::P0].stream(Pair::P02, "a").next_u64(), t[PartyId::P0].stream(Pair::P02, "b").next_u64());
  EXPECT_THROW(t[PartyId::P0].stream(Pair::P12, "x"), CapabilityError);
  EXPECT_THROW(t[PartyId::P1].stream(Pair::P02, "x"), CapabilityError);
  EXPECT_THROW(t[PartyId::P2].stream(Pair::P01, "x"), CapabilityError);
}

TEST(ShaRandom, NoCommunicationAndP0KnowsValue) {
  LocalTrio t(2);
  auto s0 = sha_random(t[PartyId::P0], Z64, 3), s1 = sha_random(t[PartyId::P1], Z64, 3), s2 = sha_random(t[PartyId::P2], Z64, 3);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(s0[i].a, s1[i].a);
    EXPECT_EQ(s0[i].b, s2[i].a);
  }
  EXPECT_NE(s0[0].a + s0[0].b, s0[1].a + s0[1].b);
  EXPECT_EQ(t.net.transcript().total(Phase::Preprocessing), 0u);
}

TEST(ShaInput, DealerSendsOneWordToP2) {
  auto run = run_parties([](Party& p) {
    std::vector<RingElem> x{Z64.from(7), Z64.from(0)};
    auto s = sha_input(p, Z64, std::span<const RingElem>(p.is(PartyId::P0) ? x : std::vector<RingElem>{}), 2, "deal");
    return s;
  });
  ASSERT_TRUE(run.ok());
  for (int i = 0; i < 2; ++i) EXPECT_EQ(run.at(PartyId::P1)[i].a + run.at(PartyId::P2)[i].a, Z64.from(i == 0 ? 7 : 0));
  EXPECT_EQ(run.transcript.bytes(PartyId::P0, PartyId::P2, Phase::Preprocessing), 16u);
  EXPECT_EQ(run.transcript.total(Phase::Preprocessing), 16u);
}

TEST(ShaInput, CorruptedDealerShiftsValue) {
  NetworkOptions no;
  no.adversary.corrupted = PartyId::P0;
  no.adversary.injections.push_back({"deal", 0, 0, 5, {}});
  auto run = run_parties(
      [](Party& p) {
        std::vector<RingElem> x{Z64.from(7)};
        return sha_input(p, Z64, std::span<const RingElem>(p.is(PartyId::P0) ? x : std::vector<RingElem>{}), 1, "deal");
      },
      no);
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run.at(PartyId::P1)[0].a + run.at(PartyId::P2)[0].a, Z64.from(12));
}

TEST(ShcInput, OwnerMessagesAndReconstruction) {
  for (auto owner : kParties) {
    auto run = run_parties([owner](Party& p) {
      std::vector<RingElem> x{Z64.from(5), encode_fixed(1.5, 16)};
      auto s = shc_input(p, Z64, owner, std::span<const RingElem>(p.is(owner) ? x : std::vector<RingElem>{}), 2);
      return s;
    });
    ASSERT_TRUE(run.ok());
    const auto &a = run.at(PartyId::P1), &b = run.at(PartyId::P2), &c = run.at(PartyId::P0);
    for (int i = 0; i < 2; ++i) {
      EXPECT_EQ(a[i].a, b[i].a);
      EXPECT_EQ(c[i].a, a[i].b);
      EXPECT_EQ(c[i].b, b[i].b);
    }
    EXPECT_EQ(open(a[0], b[0]), Z64.from(5));
    EXPECT_EQ(open(a[1], b[1]), Z64.from(98304));
    const auto& tr = run.transcript;
    if (owner == PartyId::P0) {
      EXPECT_EQ(tr.bytes(PartyId::P0, PartyId::P1, Phase::Preprocessing), 16u);
      EXPECT_EQ(tr.bytes(PartyId::P0, PartyId::P2, Phase::Preprocessing), 16u);
      EXPECT_EQ(tr.total(Phase::Preprocessing), 32u);
    } else {
      PartyId other = owner == PartyId::P1 ? PartyId::P2 : PartyId::P1;
      EXPECT_EQ(tr.bytes(owner, other, Phase::Preprocessing), 16u);
      EXPECT_EQ(tr.total(Phase::Preprocessing), 16u);
    }
  }
}

TEST(ShcRandom, NoCommunicationAndGaloisVariant) {
  LocalTrio t(3);
  const GrD dom(GrRing::get(64, 8));
  std::array<std::vector<Masked<GrElem>>, 3> s;
  for (auto id : kParties) s[idx(id)] = shc_random(t[id], dom, 4);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(s[1][i].a, s[2][i].a);
    EXPECT_EQ(s[0][i].a, s[1][i].b);
    EXPECT_EQ(s[0][i].b, s[2][i].b);
    EXPECT_EQ(s[1][i].a.degree(), 8u);
  }
  EXPECT_EQ(t.net.transcript().total(Phase::Preprocessing), 0u);
}

TEST(ShcRandom, EachSingleViewIsIndependentOfValue) {
  // ℓ = 4: chi-square test of independence between one party's view and x over 2^18 draws.
  const Zl Z4(4);
  LocalTrio t(4);
  const std::size_t n = std::size_t{1} << 18;
  std::array<std::vector<Masked<RingElem>>, 3> s;
  for (auto id : kParties) s[idx(id)] = shc_random(t[id], Z4, n);
  for (auto viewer : kParties) {
    std::vector<double> cell(256 * 16, 0), row(256, 0), col(16, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& v = s[idx(viewer)][i];
      const std::size_t view = v.a.value() * 16 + v.b.value();
      const std::size_t x = open(s[1][i], s[2][i]).value();
      cell[view * 16 + x] += 1;
      row[view] += 1;
      col[x] += 1;
    }
    double chi = 0;
    for (std::size_t r = 0; r < 256; ++r)
      for (std::size_t c = 0; c < 16; ++c) {
        const double e = row[r] * col[c] / static_cast<double>(n);
        if (e > 0) chi += (cell[r * 16 + c] - e) * (cell[r * 16 + c] - e) / e;
      }
    const double df = 255.0 * 15.0;
    EXPECT_LT(chi, df + 6 * std::sqrt(2 * df)) << to_string(viewer);
  }
}

TEST(Rec, HonestOutputsEverywhere) {
  auto run = run_parties([](Party& p) {
    // m = 10, r1 = 3, r2 = 2
    Masked<RingElem> s = p.is(PartyId::P0)   ? Masked<RingElem>{Z64.from(3), Z64.from(2)}
                         : p.is(PartyId::P1) ? Masked<RingElem>{Z64.from(10), Z64.from(3)}
                                             : Masked<RingElem>{Z64.from(10), Z64.from(2)};
    return rec(p, Z64, std::span<const Masked<RingElem>>(&s, 1));
  });
  ASSERT_TRUE(run.ok());
  for (auto id : kParties) EXPECT_EQ(run.at(id)[0], Z64.from(5));
  EXPECT_EQ(run.transcript.rounds(Phase::Preprocessing, "rec"), 1u);
}

TEST(Rec, TamperedMaskedValueToP0Aborts) {
  NetworkOptions no;
  no.adversary.corrupted = PartyId::P1;
  no.adversary.injections.push_back({"rec.m", 0, 0, 1, {}});
  auto run = run_parties(
      [](Party& p) {
        Masked<RingElem> s = p.is(PartyId::P0)   ? Masked<RingElem>{Z64.from(3), Z64.from(2)}
                             : p.is(PartyId::P1) ? Masked<RingElem>{Z64.from(10), Z64.from(3)}
                                                 : Masked<RingElem>{Z64.from(10), Z64.from(2)};
        return rec(p, Z64, std::span<const Masked<RingElem>>(&s, 1));
      },
      no);
  EXPECT_TRUE(run.aborted);
  EXPECT_NE(run.abort_reason.find("P1->P0"), std::string::npos);
}

TEST(Rec, EveryHookTamperIsCaughtAtEllFour) {
  const Zl Z4(4);
  struct Hook {
    PartyId who;
    const char* name;
    bool digest;
  };
  const Hook hooks[] = {{PartyId::P0, "rec.r1", false}, {PartyId::P0, "rec.r2", false}, {PartyId::P1, "rec.m", false},
                        {PartyId::P1, "rec.hr1", true}, {PartyId::P2, "rec.hm", true},  {PartyId::P2, "rec.hr2", true}};
  for (const auto& h : hooks)
    for (std::uint64_t x = 0; x < 16; x += 5)
      for (std::uint64_t e = 1; e < 16; ++e) {
        NetworkOptions no;
        no.adversary.corrupted = h.who;
        Injection inj{h.name, 0, 0, e, {}};
        if (h.digest) inj.tamper = [e](Bytes& b) { b[e % b.size()] ^= static_cast<std::uint8_t>(e); };
        no.adversary.injections.push_back(inj);
        auto run = run_parties(
            [&](Party& p) {
              auto s = shc_input(p, Z4, PartyId::P0, std::span<const RingElem>(p.is(PartyId::P0) ? std::vector<RingElem>{Z4.from(x)} : std::vector<RingElem>{}), 1);
              return rec(p, Z4, std::span<const Masked<RingElem>>(s));
            },
            no);
        // Every component is cross-checked against a digest from a different sender.
        ASSERT_TRUE(run.aborted) << h.name << " e=" << e;
      }
}

TEST(RecTo, OnlyTargetLearns) {
  for (auto k : kParties) {
    auto run = run_parties([k](Party& p) {
      std::vector<RingElem> x{Z64.from(41)};
      auto s = shc_input(p, Z64, PartyId::P1, std::span<const RingElem>(p.is(PartyId::P1) ? x : std::vector<RingElem>{}), 1);
      return rec_to(p, Z64, k, std::span<const Masked<RingElem>>(s));
    });
    ASSERT_TRUE(run.ok());
    for (auto id : kParties) {
      if (id == k) {
        ASSERT_TRUE(run.at(id));
        EXPECT_EQ((*run.at(id))[0], Z64.from(41));
      } else {
        EXPECT_FALSE(run.at(id));
      }
    }
  }
}

TEST(Linear, LocalOpsReconstruct) {
  auto run = run_parties([](Party& p) {
    std::vector<RingElem> x{Z64.from(9), Z64.from(4)};
    auto s = shc_input(p, Z64, PartyId::P2, std::span<const RingElem>(p.is(PartyId::P2) ? x : std::vector<RingElem>{}), 2);
    p.enter(Phase::Online);
    std::vector<Masked<RingElem>> v{s[0] + s[1], s[0] - s[1], scale(s[0], Z64.from(3)), add_const(p.id(), s[1], Z64.from(100))};
    return rec(p, Z64, std::span<const Masked<RingElem>>(v));
  });
  ASSERT_TRUE(run.ok());
  EXPECT_EQ(run.at(PartyId::P0), (std::vector<RingElem>{Z64.from(13), Z64.from(5), Z64.from(27), Z64.from(104)}));
  EXPECT_EQ(run.transcript.total(Phase::Online, ByteClass::Payload), 3u * 4 * 8);  // the rec only
}

TEST(DumpLine, Format) {
  EXPECT_EQ(dump_line(7, true, "64", {0xab, 1}, 64), "7, MASK, 64, 00000000000000ab 0000000000000001");
  EXPECT_EQ(dump_line(0, false, "8[x]2", {0xf}, 8), "0, ADD, 8[x]2, 0f");
}
