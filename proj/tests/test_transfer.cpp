#include <gtest/gtest.h>

#include "netreal/fixtures.hpp"
#include "netreal/transfer.hpp"
#include "support/oracles.hpp"
#include "support/random_systems.hpp"

namespace netreal {
namespace {

TEST(EvalTransfer, RiverSteadyStateGain) {
  // Back-substitution of (I - A) x = B by hand gives a diagonal gain.
  const CMatrix g = eval_transfer(fixtures::river_plant(), 1.0);
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(0, 0) = -10.0;
  expected(1, 1) = -5.0;
  expected(2, 2) = -10.0 / 3.0;
  EXPECT_LE((g - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EvalTransfer, StaticGainReturnsD) {
  Matrix d(2, 2);
  d << 1.0, 2.0, 3.0, 4.0;
  const auto r = static_gain(d, {1, 1}, {1, 1});
  for (const Complex z : {Complex(0.0), Complex(1.0, 1.0), Complex(-7.0)}) {
    EXPECT_EQ(eval_transfer(r, z), d.cast<Complex>());
  }
}

TEST(EvalTransfer, ProductSecondFactorAtThree) {
  const CMatrix g = eval_transfer(fixtures::product_g2(), 3.0);
  CMatrix expected = CMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;  // 1 / (3 - 2)
  EXPECT_LE((g - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(EvalTransfer, PoleRaisesPoleError) {
  EXPECT_THROW(eval_transfer(fixtures::river_plant(), 0.9), PoleError);
  EXPECT_THROW(eval_transfer(fixtures::product_g1(), 2.0), PoleError);
  EXPECT_NO_THROW(eval_transfer(fixtures::river_plant(), 0.9 + 1e-3));
}

TEST(EvalTransfer, MatchesExplicitInverse) {
  testing::RandomSystems gen(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = gen.graph(5);
    const auto r = gen.compatible(gen.dims(g.num_nodes()), g);
    const Complex z = std::polar(gen.uniform(1.5, 3.0), gen.uniform(0.0, 6.28));
    EXPECT_LE(mixed_deviation(eval_transfer(r, z), testing::transfer_by_inverse(r, z)), 1e-12);
  }
}

TEST(TransferEqual, RiverWitnessMatchesPlant) {
  const auto cmp = transfer_equal(fixtures::river_plant(), fixtures::river_nonminimal(), 16, 1e-9);
  EXPECT_TRUE(cmp.equal);
  EXPECT_EQ(cmp.points_used, 16);
  EXPECT_LE(cmp.max_deviation, 1e-12);
}

TEST(TransferEqual, InvariantUnderStateSimilarity) {
  testing::RandomSystems gen(32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen.graph(4);
    const auto r = gen.compatible(gen.dims(g.num_nodes()), g);
    const Matrix t = gen.matrix(r.n(), r.n()) + 3.0 * Matrix::Identity(r.n(), r.n());
    const Matrix ti = t.inverse();
    const BlockRealization s(r.dims(), t * r.a() * ti, t * r.b(), r.c() * ti, r.d());
    EXPECT_TRUE(transfer_equal(r, s).equal);
  }
}

TEST(TransferEqual, DetectsDifference) {
  Matrix a = fixtures::river_a();
  a(2, 2) = 0.7 + 1e-5;
  const BlockRealization other(fixtures::river_plant().dims(), a, fixtures::river_b(), Matrix::Identity(3, 3),
                               Matrix::Zero(3, 3));
  const auto cmp = transfer_equal(fixtures::river_plant(), other);
  EXPECT_FALSE(cmp.equal);
  EXPECT_GT(cmp.max_deviation, 1e-8);
}

TEST(TransferEqual, ChannelMismatchIsInputError) {
  EXPECT_THROW(transfer_equal(fixtures::river_plant(), fixtures::product_g1()), InputError);
}

TEST(CompareOnCircle, RetriesAroundPoles) {
  // The left side has a pole exactly at the first sample point.
  const double radius = 2.0;
  const BlockRealization r(NodeDims::from_counts({1}, {1}, {1}), Matrix::Constant(1, 1, radius),
                           Matrix::Identity(1, 1), Matrix::Identity(1, 1), Matrix::Zero(1, 1));
  const auto cmp = compare_on_circle([&](Complex z) { return eval_transfer(r, z); },
                                     [&](Complex z) { return testing::transfer_by_inverse(r, z); }, radius, 8, 1e-10);
  EXPECT_EQ(cmp.points_used, 8);
  EXPECT_TRUE(cmp.equal);
}

TEST(MixedDeviation, AbsoluteForSmallRelativeForLarge) {
  CMatrix x = CMatrix::Constant(1, 1, 0.0);
  CMatrix y = CMatrix::Constant(1, 1, 1e-9);
  EXPECT_NEAR(mixed_deviation(x, y), 1e-9, 1e-17);
  x(0, 0) = 1e6;
  y(0, 0) = 1e6 + 1.0;
  EXPECT_LT(mixed_deviation(x, y), 1.1e-6);
}

}  // namespace
}  // namespace netreal
