#include "downcore/oracle.hpp"
#include "support.hpp"

namespace downcore {
namespace {

using testing::expect_error;
using testing::expect_near_all;

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

TailoredMeasure random_measure(SplitMix64& rng, std::size_t k) {
  std::vector<double> gamma{0.0};
  for (std::size_t j = 0; j < k; ++j) gamma.push_back(gamma.back() + rng.uniform(0.1, 3.0));
  return tailored_measure(gamma);
}

std::vector<double> cumulative(std::span<const double> x) {
  std::vector<double> out;
  double s = 0.0;
  for (double v : x) out.push_back(s += v);
  return out;
}

/// Upper hull value at each W_j: the best chord through it, origin included.
std::vector<double> brute_hull(const std::vector<double>& W, const std::vector<double>& V) {
  std::vector<double> xs{0.0}, ys{0.0};
  xs.insert(xs.end(), W.begin(), W.end());
  ys.insert(ys.end(), V.begin(), V.end());
  std::vector<double> out;
  for (std::size_t j = 1; j < xs.size(); ++j) {
    double best = ys[j];
    for (std::size_t i = 0; i <= j; ++i) {
      for (std::size_t l = j; l < xs.size(); ++l) {
        if (i == l) continue;
        const double s = (xs[j] - xs[i]) / (xs[l] - xs[i]);
        best = std::max(best, ys[i] + s * (ys[l] - ys[i]));
      }
    }
    out.push_back(best);
  }
  return out;
}

TEST(TailoredMeasure, Examples) {
  const std::vector<double> g{0, 1, 3, 4};
  const auto m = tailored_measure(g);
  EXPECT_EQ(m.k(), 3u);
  EXPECT_EQ(vec(m.masses()), (std::vector<double>{1, 2, 1}));
  EXPECT_EQ(vec(m.positions()), (std::vector<double>{1, 3, 4}));
  EXPECT_EQ(m.lower(2.0), 1.0);
  EXPECT_EQ(m.upper(2.0), 3.0);
  EXPECT_EQ(m.lower(3.0), 3.0);
  EXPECT_EQ(m.upper(3.0), 3.0);
  EXPECT_TRUE(std::isinf(m.upper(4.5)));
  EXPECT_EQ(m.total_mass(), 4.0);
}

TEST(TailoredMeasure, Errors) {
  expect_error(ErrorCode::NotSorted, [] { tailored_measure(std::vector<double>{0, 2, 1}); });
  expect_error(ErrorCode::NotSorted, [] { tailored_measure(std::vector<double>{0, 1, 1}); });
  expect_error(ErrorCode::NotSorted, [] { tailored_measure(std::vector<double>{1, 2}); });
  expect_error(ErrorCode::NegativeEntry, [] { tailored_measure(std::vector<double>{0, -1}); });
}

TEST(TailoredMeasure, MassUpToEqualsLowerEndpoint) {
  SplitMix64 rng(21);
  for (int c = 0; c < 20; ++c) {
    const auto m = random_measure(rng, rng.between(1, 6));
    for (int i = 0; i < 100; ++i) {
      const double x = rng.uniform(0.0, 1.2 * m.total_mass());
      EXPECT_NEAR(m.mass_up_to(x), m.lower(x), 1e-12);
    }
  }
}

TEST(IntegrateLambda, Examples) {
  const auto m = tailored_measure(std::vector<double>{0, 1, 3, 4});
  EXPECT_DOUBLE_EQ(integrate_lambda(m, StepFunction{1, 1, 1}, 4.0), 4.0);
  EXPECT_DOUBLE_EQ(integrate_lambda(m, StepFunction{5, 7, 9}, 2.5), 5.0);
  EXPECT_DOUBLE_EQ(integrate_lambda(m, StepFunction{5, 7, 9}, 0.5), 0.0);
}

TEST(IntegrateLambda, AgreesWithRiemannSum) {
  SplitMix64 rng(22);
  for (int c = 0; c < 10; ++c) {
    const std::size_t k = rng.between(1, 4);
    const auto m = random_measure(rng, k);
    const auto phi = gen::step(rng, k);
    const double x = rng.uniform(0.0, 1.1 * m.total_mass());
    // midpoint rule for the integral of phi(b(t)) over [0, a(x)]
    const double ax = m.lower(x);
    const std::size_t cells = 400000;
    const double h = ax / cells;
    double riemann = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double t = (static_cast<double>(i) + 0.5) * h;
      riemann += phi[m.atom_at_or_after(t)] * h;
    }
    // each atom boundary costs at most one cell times the jump
    const double tol = static_cast<double>(k) * h * 2.0 * testing::scale_of(phi.values) + 1e-9;
    EXPECT_NEAR(integrate_lambda(m, phi, x), riemann, tol);
  }
}

TEST(Rearrange, Examples) {
  const auto r = rearrange(std::vector<double>{1, 3}, std::vector<double>{1, 1});
  ASSERT_EQ(r.pieces.size(), 2u);
  EXPECT_EQ(r.pieces[0].value, 3.0);
  EXPECT_EQ(r.pieces[1].value, 1.0);
  const auto c = rearrange(std::vector<double>{2, 2, 2}, std::vector<double>{0.5, 1, 3});
  ASSERT_EQ(c.pieces.size(), 1u);
  EXPECT_DOUBLE_EQ(c.pieces[0].length, 4.5);
  EXPECT_DOUBLE_EQ(c.value_at(4.4), 2.0);
  EXPECT_DOUBLE_EQ(c.value_at(4.5), 0.0);
  EXPECT_DOUBLE_EQ(c.integral_up_to(1.0), 2.0);
  EXPECT_DOUBLE_EQ(c.integral_up_to(10.0), 9.0);
}

TEST(Rearrange, Errors) {
  expect_error(ErrorCode::LengthMismatch, [] { rearrange(std::vector<double>{1}, std::vector<double>{1, 1}); });
  expect_error(ErrorCode::NegativeValue, [] { rearrange(std::vector<double>{-1}, std::vector<double>{1}); });
  expect_error(ErrorCode::NotIncreasingMass, [] { rearrange(std::vector<double>{1}, std::vector<double>{0}); });
}

TEST(Rearrange, PreservesMassAndDistribution) {
  SplitMix64 rng(23);
  for (int c = 0; c < 50; ++c) {
    const std::size_t k = rng.between(1, 8);
    std::vector<double> v(k), m(k);
    for (std::size_t j = 0; j < k; ++j) {
      v[j] = rng.chance(0.3) ? static_cast<double>(rng.below(3)) : rng.uniform(0, 5);
      m[j] = rng.uniform(0.1, 2);
    }
    const auto r = rearrange(v, m);
    double total = 0.0, mass = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      total += v[j] * m[j];
      mass += m[j];
    }
    EXPECT_NEAR(r.integral_up_to(1e9), total, 1e-9);
    EXPECT_NEAR(r.total_length(), mass, 1e-12);
    for (std::size_t i = 1; i < r.pieces.size(); ++i) EXPECT_GT(r.pieces[i - 1].value, r.pieces[i].value);
    // distribution function: measure of {v > s} equals the length before value drops to s
    for (int i = 0; i < 10; ++i) {
      const double s = rng.uniform(0, 5);
      double direct = 0.0, from_r = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (v[j] > s) direct += m[j];
      }
      for (const auto& p : r.pieces) {
        if (p.value > s) from_r += p.length;
      }
      EXPECT_NEAR(direct, from_r, 1e-12);
    }
  }
}

TEST(LeastConcaveMajorant, WorkedPoints) {
  const auto h = least_concave_majorant(std::vector<double>{1, 3, 4}, std::vector<double>{4, 6, 8});
  EXPECT_EQ(h.knot_abscissae, (std::vector<double>{1, 4}));
  ASSERT_EQ(h.slopes.size(), 2u);
  EXPECT_DOUBLE_EQ(h.slopes[0], 4.0);
  EXPECT_DOUBLE_EQ(h.slopes[1], 4.0 / 3.0);
  ASSERT_EQ(h.blocks.size(), 2u);
  EXPECT_EQ(h.blocks[0].first, 0u);
  EXPECT_EQ(h.blocks[0].last, 0u);
  EXPECT_EQ(h.blocks[1].first, 1u);
  EXPECT_EQ(h.blocks[1].last, 2u);
}

TEST(LeastConcaveMajorant, ConcaveDataAndSingleAtom) {
  const auto h = least_concave_majorant(std::vector<double>{1, 2, 3}, std::vector<double>{3, 5, 6});
  EXPECT_EQ(h.blocks.size(), 3u);
  const auto one = least_concave_majorant(std::vector<double>{2}, std::vector<double>{5});
  ASSERT_EQ(one.slopes.size(), 1u);
  EXPECT_DOUBLE_EQ(one.slopes[0], 2.5);
}

TEST(LeastConcaveMajorant, EqualSlopesMerge) {
  const auto h = least_concave_majorant(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6});
  ASSERT_EQ(h.blocks.size(), 1u);
  EXPECT_EQ(h.blocks[0].last, 2u);
}

TEST(LeastConcaveMajorant, RejectsNonIncreasingMass) {
  expect_error(ErrorCode::NotIncreasingMass, [] {
    least_concave_majorant(std::vector<double>{1, 1}, std::vector<double>{1, 2});
  });
}

TEST(LeastConcaveMajorant, MatchesBruteForceHull) {
  SplitMix64 rng(24);
  for (int c = 0; c < 300; ++c) {
    const std::size_t k = rng.between(1, 7);
    std::vector<double> m(k), v(k);
    for (std::size_t j = 0; j < k; ++j) {
      m[j] = rng.chance(0.3) ? static_cast<double>(rng.between(1, 3)) : rng.uniform(0.1, 3);
      v[j] = rng.chance(0.3) ? static_cast<double>(rng.below(4)) : rng.uniform(0, 4);
    }
    const auto W = cumulative(m);
    std::vector<double> mv(k);
    for (std::size_t j = 0; j < k; ++j) mv[j] = m[j] * v[j];
    const auto V = cumulative(mv);
    const auto h = least_concave_majorant(W, V);
    const auto brute = brute_hull(W, V);
    for (std::size_t j = 0; j < k; ++j) {
      EXPECT_NEAR(h.value_at(W[j]), brute[j], 1e-9 * testing::scale_of(V));
      EXPECT_GE(h.value_at(W[j]), V[j] - 1e-12 * testing::scale_of(V));
    }
    for (std::size_t b = 1; b < h.slopes.size(); ++b) EXPECT_LT(h.slopes[b], h.slopes[b - 1]);
    // the hull touches the data at every block end
    for (std::size_t b = 0; b < h.blocks.size(); ++b) {
      EXPECT_NEAR(h.knot_values[b], V[h.blocks[b].last], 1e-12 * testing::scale_of(V));
    }
  }
}

TEST(ClassicalLevel, Examples) {
  const std::vector<double> masses{1, 2, 1};
  const auto lev = classical_level(std::vector<double>{4, 1, 2}, masses);
  expect_near_all(lev.level.values, {4, 4.0 / 3.0, 4.0 / 3.0}, 1e-15);
  const auto flat = classical_level(std::vector<double>{5, 3, 3}, masses);
  EXPECT_EQ(flat.level.values, (std::vector<double>{5, 3, 3}));
  expect_error(ErrorCode::NegativeValue, [&] { classical_level(std::vector<double>{1, -1, 0}, masses); });
}

TEST(ClassicalLevel, DecreasingMajorizingAndMassPreserving) {
  SplitMix64 rng(25);
  for (int c = 0; c < 300; ++c) {
    const std::size_t k = rng.between(1, 7);
    const auto m = random_measure(rng, k);
    const auto phi = gen::step(rng, k, true);
    const auto lev = classical_level(phi.values, m.masses());
    const double tol = 1e-12 * testing::scale_of(phi.values) * m.total_mass();
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j > 0) {
        EXPECT_LE(lev.level[j], lev.level[j - 1] + 1e-12 * testing::scale_of(phi.values));
      }
      a += lev.level[j] * m.masses()[j];
      b += phi[j] * m.masses()[j];
      EXPECT_GE(a, b - tol);
    }
    EXPECT_NEAR(a, b, tol);
    // within a block the level is the mass-weighted average
    for (const auto& blk : lev.hull.blocks) {
      double num = 0.0, den = 0.0;
      for (std::size_t j = blk.first; j <= blk.last; ++j) {
        num += phi[j] * m.masses()[j];
        den += m.masses()[j];
      }
      for (std::size_t j = blk.first; j <= blk.last; ++j) EXPECT_NEAR(lev.level[j], num / den, 1e-12 * testing::scale_of(phi.values));
    }
  }
}

TEST(ClassicalLevel, RealizesTheLinearProgram) {
  // One point per atom turns the core-space LP oracle into the half-line one.
  SplitMix64 rng(26);
  for (int c = 0; c < 100; ++c) {
    const std::size_t k = rng.between(1, 5);
    const auto m = random_measure(rng, k);
    const auto phi = gen::step(rng, k, true);
    const MeasureSpace space(vec(m.masses()));
    OrderedCoreSpec spec{{{}}};
    for (std::size_t j = 0; j < k; ++j) {
      auto next = spec.chain.back();
      next.push_back(j);
      spec.chain.push_back(next);
    }
    const auto atoms = validate_core(space, spec);
    const auto lev = classical_level(phi.values, m.masses());
    for (int i = 0; i < 5; ++i) {
      const auto g = gen::decreasing_step(rng, k);
      double lhs = 0.0;
      for (std::size_t j = 0; j < k; ++j) lhs += lev.level[j] * g[j] * m.masses()[j];
      const double lp = oracle::level_defining_sup(space, atoms, FunctionOnU(phi.values), FunctionOnU(g.values));
      EXPECT_NEAR(lhs, lp, 1e-9 * std::max(1.0, lhs));
    }
  }
}

TEST(ClassicalLevel, MonotoneInTheData) {
  SplitMix64 rng(27);
  for (int c = 0; c < 200; ++c) {
    const std::size_t k = rng.between(1, 7);
    const auto m = random_measure(rng, k);
    const auto hi = gen::step(rng, k, true);
    StepFunction lo = hi;
    for (double& v : lo.values) v *= rng.chance(0.3) ? 1.0 : rng.uniform();
    const auto a = classical_level(lo.values, m.masses()).level;
    const auto b = classical_level(hi.values, m.masses()).level;
    for (std::size_t j = 0; j < k; ++j) EXPECT_LE(a[j], b[j] + 1e-12 * testing::scale_of(hi.values));
  }
}

TEST(ClassicalLdm, Examples) {
  const std::vector<double> masses{1, 2, 1};
  EXPECT_EQ(classical_ldm(std::vector<double>{1, 3, 2}, masses).values, (std::vector<double>{3, 3, 2}));
  EXPECT_EQ(classical_ldm(std::vector<double>{3, 2, 2}, masses).values, (std::vector<double>{3, 2, 2}));
  expect_error(ErrorCode::NegativeValue, [&] { classical_ldm(std::vector<double>{1, -3, 2}, masses); });
}

TEST(ClassicalLdm, LeastIdempotentMonotone) {
  SplitMix64 rng(28);
  for (int c = 0; c < 200; ++c) {
    const std::size_t k = rng.between(1, 7);
    const auto m = random_measure(rng, k);
    const auto psi = gen::step(rng, k, true);
    const auto t = classical_ldm(psi.values, m.masses());
    EXPECT_EQ(classical_ldm(t.values, m.masses()), t);
    for (std::size_t j = 0; j < k; ++j) {
      EXPECT_GE(t[j], psi[j]);
      if (j > 0) {
        EXPECT_LE(t[j], t[j - 1]);
      }
    }
    // any nonincreasing majorant dominates it
    for (int i = 0; i < 10; ++i) {
      StepFunction h = psi;
      for (double& v : h.values) v += rng.uniform(0, 1);
      for (std::size_t j = k - 1; j-- > 0;) h[j] = std::max(h[j], h[j + 1]);
      for (std::size_t j = 0; j < k; ++j) EXPECT_GE(h[j], t[j]);
    }
    StepFunction bigger = psi;
    for (double& v : bigger.values) v += rng.uniform(0, 1);
    const auto tb = classical_ldm(bigger.values, m.masses());
    for (std::size_t j = 0; j < k; ++j) EXPECT_GE(tb[j], t[j]);
  }
}

}  // namespace
}  // namespace downcore
