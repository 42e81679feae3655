#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fractalcalc/calculus.hpp"
#include "fractalcalc/errors.hpp"

using namespace fractalcalc;

namespace {

const Staircase& triadic() {
  static const Staircase s(CantorSpec::triadic());
  return s;
}

double texp(double t) { return t * std::exp(t); }

}  // namespace

TEST(ConjugateLift, Examples) {
  const Staircase& s = triadic();
  const FractalFn id = conjugate_lift([](double t) { return t; }, s);
  for (double x : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) EXPECT_EQ(id(x), s.eval(x));

  const FractalFn c = conjugate_lift([](double t) { return std::cos(t); }, s);
  EXPECT_EQ(c(0.4), c(0.5));
  EXPECT_DOUBLE_EQ(c(0.4), std::cos(s.eval(0.5)));

  EXPECT_DOUBLE_EQ(conjugate_lift(texp, s)(1.0), s.eval(1.0) * std::exp(s.eval(1.0)));
}

TEST(Derivative, Examples) {
  const Staircase& s = triadic();
  const FractalFn id = conjugate_lift([](double t) { return t; }, s);
  const FractalFn constant = conjugate_lift([](double) { return 3.5; }, s);
  for (double x : {0.0, 0.25, 1.0 / 3.0, 2.0 / 27.0, 0.75, 1.0}) {
    EXPECT_NEAR(f_alpha_derivative(id, x), 1.0, 1e-12) << x;
    EXPECT_NEAR(f_alpha_derivative(constant, x), 0.0, 1e-12) << x;
  }
  const FractalFn e = conjugate_lift([](double t) { return std::exp(t); }, s);
  EXPECT_NEAR(f_alpha_derivative(e, 1.0 / 3.0), std::exp(s.eval(1.0 / 3.0)), 1e-6);
}

TEST(Derivative, ZeroOffTheSet) {
  const FractalFn e = conjugate_lift([](double t) { return std::exp(t); }, triadic());
  EXPECT_EQ(f_alpha_derivative(e, 0.5), 0.0);
  EXPECT_EQ(f_alpha_derivative(e, 0.15), 0.0);
}

TEST(Derivative, ConjugacyAtConstructionPoints) {
  const Staircase& s = triadic();
  struct Case {
    const char* name;
    RealFn g;
    RealFn dg;
  };
  const Case cases[] = {
      {"exp", [](double t) { return std::exp(t); }, [](double t) { return std::exp(t); }},
      {"sin", [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); }},
      {"square", [](double t) { return t * t; }, [](double t) { return 2.0 * t; }},
      {"texp", texp, [](double t) { return (1.0 + t) * std::exp(t); }},
  };
  for (const auto& c : cases) {
    const FractalFn f = conjugate_lift(c.g, s);
    for (double x : s.construction_points(5)) {
      EXPECT_NEAR(f_alpha_derivative(f, x), c.dg(s.eval(x)), 1e-6) << c.name << " at " << x;
    }
  }
}

TEST(Derivative, IteratedUpToFourthOrder) {
  const Staircase& s = triadic();
  FractalFn f = conjugate_lift(texp, s);
  for (int k = 1; k <= 4; ++k) {
    f = derivative_fn(f);
    for (double x : {0.25, 1.0 / 3.0, 2.0 / 27.0, 0.75}) {
      const double t = s.eval(x);
      EXPECT_NEAR(f(x), (k + t) * std::exp(t), 1e-4) << "order " << k << " at " << x;
    }
  }
}

TEST(Derivative, DetectsKink) {
  const Staircase& s = triadic();
  const double t0 = s.eval(0.25);
  const FractalFn kink = conjugate_lift([t0](double t) { return std::abs(t - t0); }, s);
  try {
    f_alpha_derivative(kink, 0.25);
    FAIL() << "expected NonDifferentiableError";
  } catch (const NonDifferentiableError& e) {
    EXPECT_NEAR(e.first(), -1.0, 1e-6);
    EXPECT_NEAR(e.second(), 1.0, 1e-6);
  }
}

TEST(Derivative, Linear) {
  const Staircase& s = triadic();
  const FractalFn f = conjugate_lift([](double t) { return std::sin(t); }, s);
  const FractalFn g = conjugate_lift([](double t) { return t * t; }, s);
  const FractalFn h = conjugate_lift([](double t) { return 2.0 * std::sin(t) - 3.0 * t * t; }, s);
  for (double x : {0.25, 0.75, 8.0 / 9.0}) {
    EXPECT_NEAR(f_alpha_derivative(h, x), 2.0 * f_alpha_derivative(f, x) - 3.0 * f_alpha_derivative(g, x), 1e-9);
  }
}

TEST(Integral, Examples) {
  const Staircase& s = triadic();
  const double total = s.eval(1.0);
  const IntegralResult one = f_alpha_integral(conjugate_lift([](double) { return 1.0; }, s), 0.0, 1.0);
  EXPECT_NEAR(one.value, total, 1e-14);

  const FractalFn id = conjugate_lift([](double t) { return t; }, s);
  EXPECT_NEAR(f_alpha_integral_value(id, 0.0, 1.0), total * total / 2.0, 1e-13);

  const FractalFn e = conjugate_lift([](double t) { return std::exp(t); }, s);
  const IntegralResult r = f_alpha_integral(e, 0.0, 1.0);
  EXPECT_NEAR(r.value, std::exp(total) - 1.0, 1e-8);
  ASSERT_TRUE(r.lower && r.upper);
  EXPECT_LE(*r.lower, std::exp(total) - 1.0);
  EXPECT_GE(*r.upper, std::exp(total) - 1.0);

  EXPECT_NEAR(f_alpha_integral_value(e, 1.0, 0.0), -(std::exp(total) - 1.0), 1e-8);
  EXPECT_EQ(f_alpha_integral_value(e, 0.4, 0.6), 0.0);  // one plateau
}

TEST(Integral, MidpointRuleIsSecondOrder) {
  const Staircase& s = triadic();
  const FractalFn e = conjugate_lift([](double t) { return std::exp(t); }, s);
  const double exact = std::exp(s.eval(1.0)) - 1.0;
  double previous = std::abs(f_alpha_integral_value(e, 0.0, 1.0, 16) - exact);
  for (std::size_t n = 32; n <= 512; n *= 2) {
    const double err = std::abs(f_alpha_integral_value(e, 0.0, 1.0, n) - exact);
    EXPECT_NEAR(previous / err, 4.0, 0.05) << n;
    previous = err;
  }
}

TEST(Integral, FundamentalTheorem) {
  const Staircase& s = triadic();
  const FractalFn dg = conjugate_lift([](double t) { return (1.0 + t) * std::exp(t); }, s);
  for (double x : {1.0 / 3.0, 0.25, 0.7, 0.8, 1.0}) {
    EXPECT_NEAR(f_alpha_integral_value(dg, 0.0, x), texp(s.eval(x)) - texp(0.0), 1e-6) << x;
  }
  // And back: the derivative of the running integral returns the integrand.
  const FractalFn running = FractalFn::raw([&](double x) { return f_alpha_integral_value(dg, 0.0, x, 1 << 12); }, s);
  DerivativeConfig loose;
  loose.tolerance = 1e-4;
  EXPECT_NEAR(f_alpha_derivative(running, 0.25, loose), dg(0.25), 1e-4);
}

TEST(Integral, RejectsNonFiniteIntegrand) {
  const FractalFn bad =
      conjugate_lift([](double t) { return t < 0.1 ? std::numeric_limits<double>::infinity() : 1.0 / t; }, triadic());
  EXPECT_THROW(f_alpha_integral(bad, 0.0, 1.0, 64), IntegrandError);
  const FractalFn nan = conjugate_lift([](double) { return std::numeric_limits<double>::quiet_NaN(); }, triadic());
  EXPECT_THROW(f_alpha_integral(nan, 0.0, 1.0, 8), IntegrandError);
  EXPECT_THROW(f_alpha_integral(nan, 0.0, 1.0, 0), DomainError);
}

TEST(ClassicalRegression, FullIntervalMatchesOrdinaryCalculus) {
  const Staircase s(CantorSpec::full_interval());
  const FractalFn f = conjugate_lift([](double t) { return std::sin(3.0 * t); }, s);
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0}) {
    EXPECT_NEAR(f_alpha_derivative(f, x), 3.0 * std::cos(3.0 * x), 1e-8) << x;
  }
  const FractalFn e = conjugate_lift([](double t) { return std::exp(t); }, s);
  EXPECT_NEAR(f_alpha_integral_value(e, 0.0, 1.0), std::exp(1.0) - 1.0, 1e-8);
  EXPECT_NEAR(f_alpha_integral_value(f, 0.2, 0.9), (std::cos(0.6) - std::cos(2.7)) / 3.0, 1e-8);
}
