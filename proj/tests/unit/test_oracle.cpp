#include "downcore/oracle.hpp"
#include "support.hpp"

namespace downcore {
namespace {

using testing::expect_error;

TEST(SupDecreasingPball, Examples) {
  const auto space = testing::worked_space();
  const auto atoms = validate_core(space, testing::worked_spec());
  const FunctionOnU f{4, 1, 2};
  EXPECT_DOUBLE_EQ(oracle::sup_decreasing_pball(space, atoms, f, Exponent::infinity()), 8.0);
  EXPECT_DOUBLE_EQ(oracle::sup_decreasing_pball(space, atoms, f, Exponent::finite(1)), 4.0);
  EXPECT_NEAR(oracle::sup_decreasing_pball(space, atoms, f, Exponent::finite(2)), 8.0 / std::sqrt(3.0), 1e-4);
}

TEST(SupDecreasingPball, GuardsAtomCount) {
  const MeasureSpace s(std::vector<double>(7, 1.0));
  OrderedCoreSpec spec{{{}}};
  for (PointIndex u = 0; u < 7; ++u) {
    auto next = spec.chain.back();
    next.push_back(u);
    spec.chain.push_back(next);
  }
  const auto atoms = validate_core(s, spec);
  expect_error(ErrorCode::TooManyAtoms, [&] {
    oracle::sup_decreasing_pball(s, atoms, FunctionOnU(std::vector<double>(7, 1.0)), Exponent::finite(2));
  });
  expect_error(ErrorCode::TooManyAtoms, [&] {
    const FunctionOnU one(std::vector<double>(7, 1.0));
    oracle::level_defining_sup(s, atoms, one, one);
  });
}

TEST(LevelDefiningSup, Examples) {
  const auto space = testing::worked_space();
  const auto atoms = validate_core(space, testing::worked_spec());
  const FunctionOnU f{4, 1, 2};
  EXPECT_NEAR(oracle::level_defining_sup(space, atoms, f, FunctionOnU{1, 0, 0}), 4.0, 1e-12);
  EXPECT_NEAR(oracle::level_defining_sup(space, atoms, f, FunctionOnU{0, 0, 0}), 0.0, 1e-12);
  expect_error(ErrorCode::GNotDecreasing, [&] { oracle::level_defining_sup(space, atoms, f, FunctionOnU{0, 1, 0}); });
}

TEST(LevelDefiningSup, SelfPairingOfDecreasingFunctions) {
  SplitMix64 rng(71);
  for (int c = 0; c < 100; ++c) {
    const auto b = testing::random_built(rng);
    const FunctionOnU f = q_map(b.inst.space, b.atoms, gen::decreasing_step(rng, b.atoms.k()));
    double self = 0.0;
    for (std::size_t u = 0; u < f.size(); ++u) self += f[u] * f[u] * b.inst.space.weight(u);
    EXPECT_NEAR(oracle::level_defining_sup(b.inst.space, b.atoms, f, f), self, 1e-9 * std::max(1.0, self));
  }
}

TEST(Oracles, MonotoneInTheFunction) {
  SplitMix64 rng(72);
  for (int c = 0; c < 60; ++c) {
    const auto b = testing::random_built(rng, {1, 4, 4});
    FunctionOnU big = b.f;
    for (double& v : big.values) v = (v < 0 ? -1 : 1) * (std::fabs(v) + rng.uniform(0, 1));
    for (const char* p : {"1", "2", "inf"}) {
      const auto e = Exponent::parse(p);
      EXPECT_LE(oracle::sup_decreasing_pball(b.inst.space, b.atoms, b.f, e),
                oracle::sup_decreasing_pball(b.inst.space, b.atoms, big, e) + 1e-9);
    }
    const FunctionOnU g = q_map(b.inst.space, b.atoms, gen::decreasing_step(rng, b.atoms.k()));
    EXPECT_LE(oracle::level_defining_sup(b.inst.space, b.atoms, b.f, g),
              oracle::level_defining_sup(b.inst.space, b.atoms, big, g) + 1e-9);
    // a shared grid on |big| does not nest the grid on |f|; the resolution absorbs that
    const double t = rng.uniform(0.1, 3);
    const double res = oracle::k_exhaustive_resolution(b.inst.space, big, t, 12);
    for (Couple couple : {Couple::L1Linf, Couple::L1Dinf, Couple::TL1Linf}) {
      EXPECT_LE(oracle::k_exhaustive(b.inst.space, b.atoms, b.f, t, 12, couple),
                oracle::k_exhaustive(b.inst.space, b.atoms, big, t, 12, couple) + 2 * res + 1e-9);
    }
  }
}

TEST(KExhaustive, Examples) {
  const MeasureSpace one({2.0});
  const auto atoms = validate_core(one, {{{}, {0}}});
  EXPECT_EQ(oracle::k_exhaustive(one, atoms, FunctionOnU{3}, 0.0, 10, Couple::L1Linf), 0.0);
  // integral of f* over [0, t] with f* = 3 on [0, 2)
  EXPECT_NEAR(oracle::k_exhaustive(one, atoms, FunctionOnU{3}, 1.0, 10, Couple::L1Linf), 3.0, 1e-12);
  EXPECT_NEAR(oracle::k_exhaustive(one, atoms, FunctionOnU{3}, 5.0, 10, Couple::L1Linf), 6.0, 1e-12);

  const auto space = testing::worked_space();
  const auto worked = validate_core(space, testing::worked_spec());
  const double res = oracle::k_exhaustive_resolution(space, FunctionOnU{1, 3, 2}, 3.5, 30);
  EXPECT_NEAR(oracle::k_exhaustive(space, worked, FunctionOnU{1, 3, 2}, 3.5, 30, Couple::TL1Linf), 10.0, 2 * res);
}

TEST(KExhaustive, Guards) {
  const MeasureSpace five(std::vector<double>(5, 1.0));
  const auto atoms = validate_core(five, {{{}, {0, 1, 2, 3, 4}}});
  const FunctionOnU f(std::vector<double>(5, 1.0));
  expect_error(ErrorCode::TooManyPoints, [&] { oracle::k_exhaustive(five, atoms, f, 1.0, 4, Couple::L1Linf); });
  const auto space = testing::worked_space();
  const auto worked = validate_core(space, testing::worked_spec());
  expect_error(ErrorCode::EmptyGrid, [&] { oracle::k_exhaustive(space, worked, FunctionOnU{1, 2, 3}, 1.0, 0, Couple::L1Linf); });
  expect_error(ErrorCode::NegativeT, [&] { oracle::k_exhaustive(space, worked, FunctionOnU{1, 2, 3}, -1.0, 4, Couple::L1Linf); });
}

TEST(KExhaustive, HonoursDeadline) {
  const MeasureSpace four({1.0, 1.0, 1.0, 1.0});
  const auto atoms = validate_core(four, {{{}, {0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}}});
  const oracle::Deadline past = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  expect_error(ErrorCode::DeadlineExceeded, [&] {
    oracle::k_exhaustive(four, atoms, FunctionOnU{1, 2, 3, 4}, 1.0, 200, Couple::TL1Linf, past);
  });
}

}  // namespace
}  // namespace downcore
