#include <gtest/gtest.h>

#include <cmath>

#include "fractalcalc/demos.hpp"
#include "fractalcalc/errors.hpp"

using namespace fractalcalc;

TEST(Demos, Oscillator4MatchesPrintedSolution) {
  const DemoReport r = run_demo("oscillator4");
  EXPECT_LT(r.max_residual, 1e-8);
  EXPECT_LT(r.max_deviation, 1e-6);
  EXPECT_EQ(r.grid_size, r.table.rows.size());
  EXPECT_GE(r.grid_size, 129u);
}

TEST(Demos, Resonant3) {
  const DemoReport r = run_demo("resonant3");
  EXPECT_NEAR(r.extra("A"), 2.0 / 3.0, 1e-12);
  EXPECT_LT(r.max_residual, 1e-8);
  EXPECT_LT(r.max_deviation, 1e-6);
}

TEST(Demos, SpringMassBothFamilies) {
  for (char family : {'A', 'B'}) {
    const DemoReport r = run_demo("spring_mass", CantorSpec::triadic(), 65, family);
    EXPECT_LT(r.max_residual, 1e-8) << family;
    EXPECT_LT(r.extra("coupling_residual"), 1e-8) << family;
    EXPECT_LT(r.max_deviation, 1e-6) << family;
    EXPECT_LT(r.extra("reconstruction_error"), 1e-6) << family;
    EXPECT_EQ(r.table.header, (std::vector<std::string>{"x", "S", "f", "u2"}));
  }
  EXPECT_THROW(run_demo("spring_mass", CantorSpec::triadic(), 65, 'C'), InputError);
}

TEST(Demos, GapPlateausInTables) {
  const DemoReport r = run_demo("oscillator4", CantorSpec::triadic(), 33);
  const Staircase s(CantorSpec::triadic());
  // Gap midpoints carry the same value as the gap's left end.
  for (double mid : s.gap_midpoints(3)) {
    bool seen = false;
    for (const auto& row : r.table.rows) {
      if (row[0] == mid) {
        seen = true;
        const double left = s.pseudoinverse(row[1]);  // left end of the plateau
        EXPECT_LT(left, mid);
        EXPECT_NEAR(s.eval(left), row[1], 1e-14);
      }
    }
    EXPECT_TRUE(seen) << mid;
  }
}

TEST(Demos, WorksOnOtherSets) {
  const DemoReport r = run_demo("resonant3", CantorSpec::parse("cantor:m=3,r=0.2"), 40);
  EXPECT_LT(r.max_residual, 1e-8);
  EXPECT_LT(r.max_deviation, 1e-6);
}

TEST(Demos, Summary) {
  const json j = demo_summary(run_demo("resonant3", CantorSpec::triadic(), 17));
  EXPECT_EQ(j.at("demo"), "resonant3");
  EXPECT_TRUE(j.contains("A"));
  EXPECT_EQ(j.at("set").at("m"), 2);
}

TEST(Demos, UnknownName) {
  EXPECT_THROW(run_demo("pendulum"), InputError);
  EXPECT_EQ(demo_names().size(), 4u);
}

TEST(Demos, Vop3ParticularForm) {
  const DemoReport r = run_demo("vop3", CantorSpec::triadic(), 65);
  EXPECT_GT(r.extra("S_x0"), 0.01);
  EXPECT_LT(r.extra("max_deviation_particular_form"), 1e-4);
  EXPECT_LT(r.max_residual, 1e-6);
  for (const auto& row : r.table.rows) EXPECT_GE(row[1], r.extra("S_x0"));
}
