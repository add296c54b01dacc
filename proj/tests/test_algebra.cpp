#include <gtest/gtest.h>

#include "netreal/algebra.hpp"
#include "netreal/compatibility.hpp"
#include "netreal/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_systems.hpp"

namespace netreal {
namespace {

BlockRealization scalar(double a, double b, double c, double d) {
  return {NodeDims::from_counts({1}, {1}, {1}), Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b),
          Matrix::Constant(1, 1, c), Matrix::Constant(1, 1, d)};
}

Complex scalar_tf(double a, double b, double c, double d, Complex z) { return c * b / (z - a) + d; }

TEST(Interleave, NodeMajorPositions) {
  const auto layout = interleave({{2, 0, 1}, {1, 1, 0}});
  EXPECT_EQ(layout.total, 5);
  EXPECT_EQ(layout.node_sizes, (std::vector<Index>{3, 1, 1}));
  EXPECT_EQ(layout.position[0], (std::vector<Index>{0, 1, 4}));
  EXPECT_EQ(layout.position[1], (std::vector<Index>{2, 3}));
}

TEST(Add, ScalarSum) {
  const auto s = add(scalar(0.5, 1.0, 2.0, 1.0), scalar(-0.25, 3.0, 1.0, 0.5));
  EXPECT_EQ(s.n(), 2);
  EXPECT_EQ(s.d()(0, 0), 1.5);
  for (const Complex z : {Complex(2.0), Complex(0.0, 3.0)}) {
    const Complex expected = scalar_tf(0.5, 1.0, 2.0, 1.0, z) + scalar_tf(-0.25, 3.0, 1.0, 0.5, z);
    EXPECT_LE(std::abs(eval_transfer(s, z)(0, 0) - expected), 1e-14);
  }
}

TEST(Add, ChannelMismatchIsInputError) {
  EXPECT_THROW(add(fixtures::river_plant(), fixtures::product_g1()), InputError);
  const auto wide = static_gain(Matrix::Zero(3, 4), {2, 1, 1}, {1, 1, 1});
  EXPECT_THROW(add(fixtures::river_plant(), wide), InputError);
}

TEST(Multiply, ScalarSeries) {
  const auto p = multiply(scalar(0.5, 1.0, 2.0, 1.0), scalar(-0.25, 3.0, 1.0, 0.5));
  for (const Complex z : {Complex(2.0), Complex(0.0, 3.0)}) {
    const Complex expected = scalar_tf(0.5, 1.0, 2.0, 1.0, z) * scalar_tf(-0.25, 3.0, 1.0, 0.5, z);
    EXPECT_LE(std::abs(eval_transfer(p, z)(0, 0) - expected), 1e-14);
  }
}

TEST(Multiply, InnerStateComesFirstAtEachNode) {
  const auto p = multiply(scalar(0.5, 1.0, 2.0, 0.0), scalar(-0.25, 3.0, 1.0, 0.0));
  Matrix a(2, 2);
  a << -0.25, 0.0, 1.0, 0.5;
  EXPECT_EQ(p.a(), a);
  EXPECT_EQ(p.b()(0, 0), 3.0);
  EXPECT_EQ(p.c()(0, 1), 2.0);
}

TEST(Multiply, FlagsUnstableFactors) {
  const auto rep = multiply_report(scalar(0.5, 1.0, 1.0, 0.0), scalar(1.5, 1.0, 1.0, 0.0));
  EXPECT_TRUE(rep.outer_stable);
  EXPECT_FALSE(rep.inner_stable);
  EXPECT_FALSE(rep.factors_stable());
}

TEST(Multiply, NonConformableIsInputError) {
  const auto outer = static_gain(Matrix::Zero(3, 4), {2, 1, 1}, {1, 1, 1});
  EXPECT_THROW(multiply(outer, fixtures::river_plant()), InputError);
}

TEST(Invert, ScalarInverse) {
  // (0.5, 1, 2, 1)^{-1} = (0.5 - 2, 1, -2, 1) = (-1.5, 1, -2, 1)
  const auto inv = invert(scalar(0.5, 1.0, 2.0, 1.0));
  EXPECT_EQ(inv.a()(0, 0), -1.5);
  EXPECT_EQ(inv.b()(0, 0), 1.0);
  EXPECT_EQ(inv.c()(0, 0), -2.0);
  EXPECT_EQ(inv.d()(0, 0), 1.0);
}

TEST(Invert, ScalarInverseWithLargeFeedthrough) {
  // (0.5, 1, 1, 1)^{-1} has A = 0.5 - 1 * 1 * 1 = -0.5.
  const auto inv = invert(scalar(0.5, 1.0, 1.0, 1.0));
  EXPECT_EQ(inv.a()(0, 0), -0.5);
  const Complex z(1.3, 0.4);
  EXPECT_LE(std::abs(eval_transfer(inv, z)(0, 0) * scalar_tf(0.5, 1.0, 1.0, 1.0, z) - 1.0), 1e-14);
}

TEST(Invert, SingularDirectTermThrows) {
  EXPECT_THROW(invert(fixtures::river_plant()), InversionError);
  EXPECT_THROW(invert(scalar(0.5, 1.0, 1.0, 0.0)), InversionError);
  // The guard is a condition number, so it needs two channels to bite.
  EXPECT_NO_THROW(invert(scalar(0.5, 1.0, 1.0, 1e-10)));
  Matrix d = Matrix::Identity(2, 2);
  d(1, 1) = 1e-10;
  EXPECT_THROW(invert(static_gain(d, {2}, {2})), InversionError);
  EXPECT_NO_THROW(invert(static_gain(d, {2}, {2}), 1e12));
}

TEST(Invert, NonSquareChannelsThrow) {
  const auto r = static_gain(Matrix::Identity(2, 2), {2}, {2});
  EXPECT_NO_THROW(invert(r));
  const auto skew = static_gain(Matrix::Identity(2, 2), {1, 1}, {2, 0});
  EXPECT_THROW(invert(skew), InversionError);
}

TEST(Invert, ProductWithInverseIsIdentity) {
  testing::RandomSystems gen(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen.graph(4);
    const auto r = gen.compatible(gen.dims(g.num_nodes(), 3, true), g, {.square_channels = true});
    const auto prod = multiply(r, invert(r));
    for (const Complex z : circle_points(3.0, 4, 0.3)) {
      EXPECT_LE(mixed_deviation(eval_transfer(prod, z), CMatrix::Identity(r.p(), r.p())), 1e-10);
    }
  }
}

TEST(Closure, RandomOperandsStayCompatibleAndMatchOracles) {
  testing::RandomSystems gen(42);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = gen.graph(5);
    const auto dims = gen.dims(g.num_nodes(), 3, true);
    const testing::SystemShape shape{.square_channels = true};
    const auto r1 = gen.compatible(dims, g, shape);
    const auto r2 = gen.compatible(dims, g, shape);
    const auto sum = add(r1, r2);
    const auto prod = multiply(r1, r2);
    const auto inv = invert(r1);
    for (const auto* s : {&sum, &prod, &inv}) {
      EXPECT_TRUE(check_compatibility(*s, g).ok());
      EXPECT_TRUE(testing::forbidden_blocks_bitwise_zero(*s, g));
    }
    const Complex z = std::polar(2.5, gen.uniform(0.0, 6.0));
    const CMatrix g1 = testing::transfer_by_inverse(r1, z);
    const CMatrix g2 = testing::transfer_by_inverse(r2, z);
    EXPECT_LE(mixed_deviation(eval_transfer(sum, z), g1 + g2), 1e-10);
    EXPECT_LE(mixed_deviation(eval_transfer(prod, z), g1 * g2), 1e-10);
    EXPECT_LE(mixed_deviation(eval_transfer(inv, z), CMatrix(g1.inverse())), 1e-8);
  }
}

TEST(Closure, RiverPlantSquaredStaysOnPattern) {
  const auto w = fixtures::river_nonminimal();
  const auto p = multiply(w, negate_outputs(w));
  EXPECT_TRUE(check_compatibility(p, fixtures::river_graph()).ok());
  EXPECT_EQ(p.n(), 10);
}

}  // namespace
}  // namespace netreal
