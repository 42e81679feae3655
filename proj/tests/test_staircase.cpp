#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/staircase.hpp"

using namespace fractalcalc;

namespace {

const double kTriadicAlpha = std::log(2.0) / std::log(3.0);

}  // namespace

TEST(Staircase, AnchorAndSymmetry) {
  const Staircase s(CantorSpec::triadic());
  EXPECT_EQ(s.eval(0.0), 0.0);
  EXPECT_EQ(s.eval(1.0 / 3.0), s.eval(1.0) / 2.0);
  EXPECT_EQ(s.eval(2.0 / 3.0), s.eval(1.0) / 2.0);
  EXPECT_EQ(s.eval(1.0 / 9.0), s.eval(1.0) / 4.0);
  EXPECT_EQ(s.eval(0.4), s.eval(0.5));
  EXPECT_NEAR(s.eval(0.25), s.eval(1.0) / 3.0, 2e-10);  // 1/4 is not a construction point
}

TEST(Staircase, TotalIsGammaFactorAndMatchesMass) {
  const Staircase s(CantorSpec::triadic());
  const double g = std::tgamma(kTriadicAlpha + 1.0);
  EXPECT_DOUBLE_EQ(s.eval(1.0), g);
  EXPECT_NEAR(s.eval(1.0), mass(CantorSpec::triadic(), 0.0, 1.0, kTriadicAlpha, 1e-6).value, 1e-6);
  EXPECT_DOUBLE_EQ(s.normalization(), g);
}

TEST(Staircase, NegativeLeftOfAnchor) {
  StaircaseOptions opts;
  opts.a0 = 2.0 / 3.0;
  const Staircase s(CantorSpec::triadic(), opts);
  EXPECT_EQ(s.eval(2.0 / 3.0), 0.0);
  EXPECT_NEAR(s.eval(0.0), -s.normalization() / 2.0, 1e-15);
  EXPECT_NEAR(s.eval(1.0), s.normalization() / 2.0, 1e-15);
  EXPECT_EQ(s.eval(0.5), 0.0);  // same plateau as the anchor
}

TEST(Staircase, FullIntervalIsShiftedIdentity) {
  StaircaseOptions opts;
  opts.a0 = 0.25;
  const Staircase s(CantorSpec::full_interval(), opts);
  for (double x : {0.0, 0.1, 0.25, 0.5, 0.7071, 1.0}) EXPECT_NEAR(s.eval(x), x - 0.25, 1e-14) << x;
}

TEST(Staircase, RejectsOutOfRange) {
  const Staircase s(CantorSpec::triadic());
  EXPECT_THROW(s.eval(-0.01), DomainError);
  EXPECT_THROW(s.eval(1.01), DomainError);
  StaircaseOptions bad;
  bad.a0 = 2.0;
  EXPECT_THROW(Staircase(CantorSpec::triadic(), bad), DomainError);
}

TEST(Staircase, MonotoneOverRandomPairs) {
  for (const CantorSpec& spec :
       {CantorSpec::triadic(), CantorSpec::parse("cantor:m=3,r=0.2,a=-1,b=2"), CantorSpec::parse("cantor:m=2,r=0.25")}) {
    StaircaseOptions opts;
    opts.depth = 12;
    const Staircase s(spec, opts);
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> u(spec.a, spec.b);
    for (int i = 0; i < 10000; ++i) {
      double x1 = u(rng);
      double x2 = u(rng);
      if (x1 > x2) std::swap(x1, x2);
      ASSERT_LE(s.eval(x1), s.eval(x2)) << x1 << " " << x2;
    }
  }
}

TEST(Staircase, ConstantOnEveryGap) {
  const Staircase s(CantorSpec::triadic());
  const double eps = 1e-9;
  for (int level = 0; level < 7; ++level) {
    const double width = s.cell_width(level);
    const auto cells = static_cast<unsigned long long>(std::llround(std::pow(2.0, level)));
    for (unsigned long long i = 0; i < cells; ++i) {
      const double g1 = s.cell_start(level, i) + width / 3.0;
      const double g2 = g1 + width / 3.0;
      const double plateau = s.eval(g1);
      EXPECT_EQ(s.eval(g1 + eps), plateau);
      EXPECT_EQ(s.eval(0.5 * (g1 + g2)), plateau);
      EXPECT_EQ(s.eval(g2 - eps), plateau);
    }
  }
}

TEST(Staircase, ScalesWithInterval) {
  const Staircase unit(CantorSpec::triadic());
  const Staircase wide(CantorSpec::parse("cantor:m=2,r=0.3333333333333333,a=2,b=5"));
  const double scale = std::pow(3.0, kTriadicAlpha);  // = 2
  for (double x : {0.0, 0.25, 1.0 / 3.0, 0.8, 1.0}) {
    EXPECT_NEAR(wide.eval(2.0 + 3.0 * x), scale * unit.eval(x), 1e-13) << x;
  }
}

TEST(Pseudoinverse, Examples) {
  const Staircase s(CantorSpec::triadic());
  EXPECT_EQ(s.pseudoinverse(0.0), 0.0);
  EXPECT_DOUBLE_EQ(s.pseudoinverse(s.eval(1.0)), 1.0);
  EXPECT_THROW(s.pseudoinverse(-0.1), DomainError);
  EXPECT_THROW(s.pseudoinverse(s.eval(1.0) + 0.1), DomainError);

  // Brute force over level-10 construction points: the smallest one reaching S(1)/2.
  const double u = s.eval(1.0) / 2.0;
  double smallest = INFINITY;
  for (double x : s.construction_points(10)) {
    if (s.eval(x) >= u) smallest = std::min(smallest, x);
  }
  EXPECT_NEAR(smallest, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.pseudoinverse(u), smallest, 1e-15);
}

TEST(Pseudoinverse, LeftInverseOnTheSet) {
  const Staircase s(CantorSpec::triadic());
  const auto pts = s.construction_points(10);
  for (std::size_t i = 0; i < pts.size(); i += 7) {
    const double x = pts[i];
    EXPECT_NEAR(s.eval(s.pseudoinverse(s.eval(x))), s.eval(x), 1e-13);
    EXPECT_LE(s.pseudoinverse(s.eval(x)), x + 1e-15);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, s.eval(1.0));
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    const double x = s.pseudoinverse(v);
    EXPECT_TRUE(s.contains(x));
    // Generic points carry ~33 ternary digits in a double, so S is good to about 2^-33 there.
    EXPECT_NEAR(s.eval(x), v, 1e-9);
  }
}

TEST(Stencil, EvenlySpacedInStaircase) {
  const Staircase s(CantorSpec::triadic());
  const double x = 0.25;
  for (int level : {4, 6, 10}) {
    const auto st = s.stencil(x, level, 4);
    ASSERT_EQ(st.left.size(), 4u);
    ASSERT_EQ(st.right.size(), 4u);
    const double step = s.normalization() / std::pow(2.0, level);
    const double sx = s.eval(x);
    for (std::size_t k = 0; k < 4; ++k) {
      EXPECT_LT(st.left[k], x);
      EXPECT_GT(st.right[k], x);
      EXPECT_TRUE(s.contains(st.left[k]));
      EXPECT_TRUE(s.contains(st.right[k]));
      // 1/4 has Cantor value 1/3, strictly between multiples of 2^-k.
      EXPECT_NEAR(s.eval(st.right[k]) - s.eval(st.left[k]), (2.0 * k + 1.0) * step, 1e-12);
      EXPECT_GT(s.eval(st.right[k]), sx);
      EXPECT_LT(s.eval(st.left[k]), sx);
    }
    for (std::size_t k = 1; k < 4; ++k) {
      EXPECT_NEAR(s.eval(st.left[k - 1]) - s.eval(st.left[k]), step, 1e-12);
      EXPECT_NEAR(s.eval(st.right[k]) - s.eval(st.right[k - 1]), step, 1e-12);
    }
  }
  const auto edge = s.neighbors(0.0, 5);
  EXPECT_FALSE(edge.left.has_value());
  ASSERT_TRUE(edge.right.has_value());
  EXPECT_NEAR(*edge.right, std::pow(3.0, -5), 1e-16);
}

TEST(ConstructionPoints, CountAndMembership) {
  const Staircase s(CantorSpec::triadic());
  for (int level = 0; level <= 8; ++level) {
    const auto pts = s.construction_points(level);
    EXPECT_EQ(pts.size(), static_cast<std::size_t>(std::llround(std::pow(2.0, level + 1))));
    for (double x : pts) EXPECT_TRUE(s.contains(x));
  }
  for (double x : s.gap_midpoints(3)) EXPECT_FALSE(s.contains(x));
  EXPECT_EQ(s.gap_midpoints(3).size(), 7u);
}
