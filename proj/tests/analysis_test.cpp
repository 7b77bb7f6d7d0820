#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "chainent/analysis.hpp"
#include "chainent/error.hpp"
#include "chainent/oracle.hpp"
#include "test_support.hpp"

namespace chainent {
namespace {

using testing::decoupled_model;
using testing::reference_model;

SweepTable synthetic_table(double noise, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-noise, noise);
  SweepTable t;
  for (int lx : {2, 4, 8, 16}) {
    for (int ly : {16, 32, 64, 128}) {
      const double s = 0.5 * lx * std::log(ly) + 2.0 * lx + 3.0 * ly + 1.0 + (noise > 0 ? u(rng) : 0.0);
      t.rows.push_back({lx, ly, s, 0.0, 0.0, 0.0});
    }
  }
  return t;
}

TEST(Sweep, FullBlockIsPure) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(5, 4));
  const SweepTable t = sweep(p, Grid{{5}, {4}});
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_LT(t.rows[0].s, 1e-9);
}

TEST(Sweep, DecoupledEntropyProportionalToChains) {
  const CorrelationPair p =
      ground_state_correlations(decoupled_model(), Geometry(8, 8), ValidationMode::Permissive);
  const SweepTable t = sweep(p, Grid{{2}, {1, 2, 4}});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_NEAR(t.rows[1].s, 2.0 * t.rows[0].s, 1e-10);
  EXPECT_NEAR(t.rows[2].s, 4.0 * t.rows[0].s, 1e-10);
}

TEST(Sweep, MatchesOracleOnSmallGrid) {
  const Geometry g(8, 8);
  const CorrelationPair p = ground_state_correlations(reference_model(), g);
  const DenseCorrelations dense = dense_ground_state(reference_model(), g);
  const SweepTable t = sweep(p, Grid{{1, 2, 3, 4}, {1, 2, 3, 4}});
  ASSERT_EQ(t.rows.size(), 16u);
  for (const auto& r : t.rows) {
    EXPECT_NEAR(r.s, dense_entropy(dense, block_indices(g, BlockSpec{r.l_x, r.l_y})), 1e-8);
    EXPECT_EQ(r.s, r.s1 + r.s2);
    EXPECT_EQ(r.wall_ms, 0.0);
  }
}

TEST(Sweep, RowsSortedAndUnique) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(8, 8));
  const SweepTable t = sweep(p, Grid{{3, 1, 3}, {2, 1, 2}});
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0].l_x, 1);
  EXPECT_EQ(t.rows[0].l_y, 1);
  EXPECT_EQ(t.rows[3].l_x, 3);
  EXPECT_EQ(t.rows[3].l_y, 2);
}

TEST(Sweep, DeterministicAcrossRunsAndThreads) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(64, 256));
  const Grid grid{{2, 4, 8, 16}, {16, 32, 64, 128}};
  std::ostringstream a, b, c;
  write_sweep_csv(sweep(p, grid), a);
  write_sweep_csv(sweep(p, grid), b);
  write_sweep_csv(sweep(p, grid, SweepOptions{Placement::centered(), 4, false}), c);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
}

TEST(Sweep, RejectsOversizedGrid) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(4, 4));
  EXPECT_THROW(sweep(p, Grid{{2, 5}, {1}}), Error);
}

TEST(ScalingFit, ExactRecovery) {
  const ScalingFit f = scaling_fit(synthetic_table(0.0, 0));
  EXPECT_NEAR(f.b, 0.5, 1e-10);
  EXPECT_NEAR(f.a1, 2.0, 1e-10);
  EXPECT_NEAR(f.a2, 3.0, 1e-10);
  EXPECT_NEAR(f.a0, 1.0, 1e-10);
  EXPECT_LT(f.rms_residual, 1e-10);
}

TEST(ScalingFit, NoisyRecovery) {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    const ScalingFit f = scaling_fit(synthetic_table(1e-6, seed));
    EXPECT_NEAR(f.b, 0.5, 1e-4);
    EXPECT_NEAR(f.a1, 2.0, 1e-4);
    EXPECT_NEAR(f.a2, 3.0, 1e-4);
    EXPECT_NEAR(f.a0, 1.0, 1e-4);
  }
}

TEST(ScalingFit, DegenerateDesigns) {
  SweepTable few = synthetic_table(0.0, 0);
  few.rows.resize(7);
  SweepTable one_lx;
  for (int ly : {2, 4, 8, 16, 32, 64, 128, 256}) one_lx.rows.push_back({4, ly, 1.0, 0, 0, 0});
  SweepTable two_ly;
  for (int lx : {1, 2, 3, 4}) {
    for (int ly : {2, 4}) two_ly.rows.push_back({lx, ly, 1.0, 0, 0, 0});
  }
  for (const SweepTable* t : {&few, &one_lx, &two_ly}) {
    try {
      scaling_fit(*t);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DegenerateDesign);
    }
  }
}

TEST(BoundsResidual, LinearResidualFitsExactly) {
  const BoundsResidual br = bounds_residual(synthetic_table(0.0, 0));
  EXPECT_NEAR(br.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(br.c_lx, 2.0, 1e-9);
  EXPECT_NEAR(br.c_ly, 3.0, 1e-9);
  EXPECT_NEAR(br.c0, 1.0, 1e-9);
}

TEST(BoundsResidual, SingleChainCountIsDegenerate) {
  SweepTable t;
  for (int lx : {1, 2, 3, 4, 5}) t.rows.push_back({lx, 8, 1.0 * lx, 0, 0, 0});
  try {
    bounds_residual(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDesign);
  }
}

TEST(EntropyBounds, SandwichActualEntropy) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(64, 1024));
  for (int lx : {1, 3, 8}) {
    for (int ly : {2, 16, 128}) {
      const EntropyResult r = block_entropy(p, BlockSpec{lx, ly});
      const EntropyBounds b = entropy_bounds(r);
      EXPECT_LE(b.lower, r.s + 1e-12);
      EXPECT_LT(r.s, b.upper);
    }
  }
}

TEST(Saturation, ReferenceModelSaturates) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(128, 64));
  const std::vector<int> lxs{2, 4, 8, 16, 32};
  const auto curve = saturation_curve(p, 8, lxs);
  ASSERT_EQ(curve.size(), lxs.size());
  EXPECT_LT(std::abs(curve[4].value - curve[3].value), 1e-3);
  for (std::size_t i = 2; i < curve.size(); ++i) {
    EXPECT_LE(std::abs(curve[i].value - curve[i - 1].value),
              std::abs(curve[i - 1].value - curve[i - 2].value) + 1e-15);
  }
}

TEST(Saturation, FullWindowIsZero) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(6, 5));
  const std::vector<int> lxs{6};
  EXPECT_LT(std::abs(saturation_curve(p, 5, lxs)[0].value), 1e-9);
}

TEST(Saturation, DecoupledEqualsSingleChainEntropy) {
  const Geometry g(12, 3);
  const CorrelationPair p = ground_state_correlations(decoupled_model(), g, ValidationMode::Permissive);
  const DenseCorrelations dense = dense_ground_state(decoupled_model(), g);
  const std::vector<int> lxs{1, 2, 4, 6, 8};
  for (const auto& pt : saturation_curve(p, 3, lxs)) {
    const double chain = dense_entropy(dense, block_indices(g, BlockSpec{pt.l_x, 1}));
    EXPECT_NEAR(pt.value, chain, 1e-9) << pt.l_x;
  }
}

TEST(Saturation, NeedsTwoChains) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(6, 5));
  const std::vector<int> lxs{2};
  EXPECT_THROW(saturation_curve(p, 1, lxs), Error);
}

TEST(Lidskii, DecoupledHasNoChainDependence) {
  const CorrelationPair p =
      ground_state_correlations(decoupled_model(), Geometry(16, 4), ValidationMode::Permissive);
  const std::vector<int> lys{4, 16, 64};
  const LidskiiReport rep = lidskii_check(extract_block(p, BlockSpec{4, 1}), lys);
  EXPECT_TRUE(rep.all_hold);
  for (const auto& row : rep.rows) {
    EXPECT_DOUBLE_EQ(row.deviation, rep.rows[0].deviation);
    EXPECT_NEAR(row.deviation, row.bound, 1e-12);
    EXPECT_EQ(row.relative_deviation, 0.0);
  }
}

TEST(Lidskii, ReferenceModelBoundAndTraceIdentity) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(64, 512));
  const std::vector<int> lys{4, 16, 64, 256};
  const LidskiiReport rep = lidskii_check(extract_block(p, BlockSpec{4, 1}), lys);
  EXPECT_TRUE(rep.all_hold);
  ASSERT_EQ(rep.rows.size(), 4u);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    EXPECT_LE(rep.rows[i].deviation, rep.rows[i].bound);
    EXPECT_LT(rep.rows[i].trace_rel_error, 1e-10);
    if (i > 0) EXPECT_LT(rep.rows[i].relative_deviation, rep.rows[i - 1].relative_deviation);
  }
}

TEST(Lidskii, RandomModels) {
  std::mt19937 rng(77);
  const std::vector<int> lys{1, 7, 50, 300};
  for (int trial = 0; trial < 20; ++trial) {
    const ChainCouplings c = testing::random_strict_model(rng);
    const CorrelationPair p = ground_state_correlations(c, Geometry(24, 64));
    EXPECT_TRUE(lidskii_check(extract_block(p, BlockSpec{1 + trial % 8, 1}), lys).all_hold);
  }
}

TEST(SzegoConsequence, ReferenceModelLargeWindow) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(512, 16));
  const SzegoConsequence s = szego_consequence_check(extract_block(p, BlockSpec{128, 1}), reference_model());
  EXPECT_NEAR(s.constant, 1.0 / std::sqrt(5.0), 1e-13);
  EXPECT_LT(s.deviation, 0.01);
}

TEST(SzegoConsequence, DecoupledBothSidesZero) {
  const CorrelationPair p =
      ground_state_correlations(decoupled_model(), Geometry(32, 4), ValidationMode::Permissive);
  const SzegoConsequence s = szego_consequence_check(extract_block(p, BlockSpec{8, 1}), decoupled_model());
  EXPECT_EQ(s.trace_ratio, 0.0);
  EXPECT_EQ(s.constant, 0.0);
  EXPECT_EQ(s.deviation, 0.0);
}

TEST(SzegoConsequence, DeviationShrinksWithWindow) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(512, 16));
  const std::vector<int> lxs{8, 32, 128};
  // A corner window carries a genuine boundary term of order 1 / l_x.
  const auto corner = szego_consequence_check(p, lxs, Placement::corner());
  EXPECT_GT(corner[0].deviation, corner[1].deviation);
  EXPECT_GT(corner[1].deviation, corner[2].deviation);
  // Deep in the bulk the diagonal of the inverse already equals the constant.
  for (const auto& s : szego_consequence_check(p, lxs, Placement::centered())) EXPECT_LT(s.deviation, 1e-12);
}

TEST(SweepCsv, RoundTripIsLossless) {
  const CorrelationPair p = ground_state_correlations(reference_model(), Geometry(32, 64));
  const SweepTable t = sweep(p, Grid{{1, 3, 7}, {2, 9}});
  std::stringstream ss;
  write_sweep_csv(t, ss);
  EXPECT_EQ(ss.str().substr(0, 23), "l_x,l_y,S,S1,S2,wall_ms");
  const SweepTable back = read_sweep_csv(ss);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].l_x, t.rows[i].l_x);
    EXPECT_EQ(back.rows[i].l_y, t.rows[i].l_y);
    EXPECT_EQ(back.rows[i].s, t.rows[i].s);
    EXPECT_EQ(back.rows[i].s1, t.rows[i].s1);
    EXPECT_EQ(back.rows[i].s2, t.rows[i].s2);
  }
}

TEST(SweepCsv, RejectsMalformed) {
  for (const char* text : {"", "x,y\n", "l_x,l_y,S,S1,S2,wall_ms\n1,2,3\n",
                           "l_x,l_y,S,S1,S2,wall_ms\n1,2,abc,0,0,0\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_sweep_csv(in), Error) << text;
  }
}

}  // namespace
}  // namespace chainent
