#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cbo/error.hpp"
#include "cbo/objectives.hpp"

namespace cbo {
namespace {

double rastrigin_1d(double v) { return v * v + 2.5 * (1.0 - std::cos(2.0 * std::numbers::pi * v)); }

TEST(Rastrigin, PointValues) {
  const auto e = rastrigin(1);
  EXPECT_EQ(e(Vec{0.0}), 0.0);
  EXPECT_NEAR(e(Vec{1.0}), 1.0, 1e-14);
  EXPECT_NEAR(e(Vec{0.5}), 5.25, 1e-14);
}

TEST(Rastrigin, Metadata) {
  const auto e = rastrigin(3);
  ASSERT_TRUE(e.minimizer);
  EXPECT_EQ(*e.minimizer, Vec(3, 0.0));
  EXPECT_EQ(e.e_under, 0.0);
  EXPECT_EQ(e.nu, 0.5);
  EXPECT_EQ(e.eta, 1.0);
  EXPECT_TRUE(std::isinf(e.r0));
  EXPECT_TRUE(e.metadata_is_heuristic);
  EXPECT_EQ(e.c3, 1.0);
  EXPECT_EQ(e.c4, 1.0);
  EXPECT_EQ(e.c2, 6.0);
  EXPECT_DOUBLE_EQ(e.l_e, 3.0 * (20.0 + 5.0 * std::numbers::pi));
  EXPECT_EQ(e(*e.minimizer), e.e_under);
}

TEST(Rastrigin, ZeroDimensionRejected) {
  try {
    (void)rastrigin(0);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::kInvalidDimension);
  }
}

TEST(Rastrigin, SeparableSum) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (std::size_t d = 1; d <= 8; ++d) {
    const auto e = rastrigin(d);
    for (int rep = 0; rep < 200; ++rep) {
      Vec v(d);
      double sum = 0.0;
      for (auto& x : v) {
        x = u(rng);
        sum += rastrigin(1)(Vec{x});
      }
      EXPECT_NEAR(e(v), sum, 1e-12 * (1.0 + sum));
    }
  }
}

TEST(Rastrigin, QuadraticMinorantAndEvenness) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const auto e = rastrigin(1);
  for (int rep = 0; rep < 10000; ++rep) {
    const double v = u(rng);
    ASSERT_GE(e(Vec{v}), v * v);
    ASSERT_EQ(e(Vec{v}), e(Vec{-v}));
    ASSERT_NEAR(e(Vec{v}), rastrigin_1d(v), 1e-12);
  }
}

TEST(Rastrigin, GrowthAssumptionOnSamples) {
  // E(v) - E_ <= L_E (1 + |v - v*|^gamma) |v - v*| and E(v) <= C2 (1 + |v|^2) on [-10, 10]^d.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (std::size_t d : {1u, 2u, 4u}) {
    const auto e = rastrigin(d);
    for (int rep = 0; rep < 2000; ++rep) {
      Vec v(d);
      double n2 = 0.0;
      for (auto& x : v) {
        x = u(rng);
        n2 += x * x;
      }
      const double n = std::sqrt(n2);
      ASSERT_LE(e(v) - e.e_under, e.l_e * (1.0 + std::pow(n, e.gamma)) * n + 1e-12);
      ASSERT_LE(e(v), e.c2 * (static_cast<double>(d) + n2));
      ASSERT_LE(n, std::pow(e(v) - e.e_under, e.nu) / e.eta + 1e-12);
    }
  }
}

TEST(Quadratic, PointValues) {
  EXPECT_EQ(quadratic(1, {0.0})(Vec{2.0}), 4.0);
  EXPECT_EQ(quadratic(2, {1.0, 1.0})(Vec{0.0, 0.0}), 2.0);
  const auto q = quadratic(3, {1.0, -2.0, 0.5});
  EXPECT_EQ(q(*q.minimizer), 0.0);
  EXPECT_EQ(q.e_under, 0.0);
  EXPECT_EQ(q.eta, 1.0);
  EXPECT_EQ(q.nu, 0.5);
  EXPECT_TRUE(std::isinf(q.r0));
  EXPECT_FALSE(q.metadata_is_heuristic);
}

TEST(Quadratic, CenterLengthMismatch) {
  try {
    (void)quadratic(2, {1.0});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::kInvalidDimension);
  }
}

TEST(Quadratic, InverseContinuityHoldsExactly) {
  std::mt19937_64 rng(14);
  std::normal_distribution<double> g(0.0, 3.0);
  const auto q = quadratic(2, {0.5, -1.0});
  for (int rep = 0; rep < 2000; ++rep) {
    const Vec v{g(rng), g(rng)};
    const double dist = std::hypot(v[0] - 0.5, v[1] + 1.0);
    ASSERT_NEAR(dist, std::pow(q(v) - q.e_under, q.nu) / q.eta, 1e-12 * (1.0 + dist));
  }
}

TEST(MakeObjective, ResolvesNames) {
  EXPECT_EQ(make_objective("rastrigin", 2).name, "rastrigin");
  const auto q = make_objective("quadratic", 2);
  EXPECT_EQ(*q.minimizer, Vec(2, 0.0));
  EXPECT_THROW((void)make_objective("ackley", 2), Error);
}

TEST(Transforms, OffsetAndTranslation) {
  const auto base = rastrigin(2);
  const auto off = with_offset(base, 3.0);
  EXPECT_EQ(off.e_under, 3.0);
  EXPECT_EQ(off(Vec{0.3, 0.1}), base(Vec{0.3, 0.1}) + 3.0);
  const auto tr = translated(base, {1.0, 2.0});
  EXPECT_EQ(*tr.minimizer, (Vec{1.0, 2.0}));
  EXPECT_EQ(tr(Vec{1.0, 2.0}), 0.0);
}

}  // namespace
}  // namespace cbo
