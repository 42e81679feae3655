#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "fractalcalc/staircase.hpp"

namespace fractalcalc {

using RealFn = std::function<double(double)>;

/// A function on [a, b] tied to a staircase. `conjugate` wraps a classical g(t) and evaluates
/// g(S(x)); `raw` wraps an arbitrary h(x).
class FractalFn {
 public:
  enum class Form { conjugate, raw };

  static FractalFn conjugate(RealFn g, Staircase staircase);
  static FractalFn raw(RealFn h, Staircase staircase);

  double operator()(double x) const;

  Form form() const { return form_; }
  const RealFn& classical() const { return fn_; }
  const Staircase& staircase() const { return staircase_; }

 private:
  FractalFn(Form form, RealFn fn, Staircase staircase);

  Form form_;
  RealFn fn_;
  Staircase staircase_;
};

/// x -> g(S(x)).
FractalFn conjugate_lift(RealFn g, const Staircase& staircase);

/// Step control for the fractal difference quotient. Level k looks at the level-k
/// construction points nearest x, whose staircase increments are multiples of
/// normalization / m^k, so the steps shrink geometrically with k.
///
/// With `richardson` each level fits f(y) - f(x) by a polynomial in S(y) - S(x) over `samples`
/// points per side and takes its slope, i.e. the quotient extrapolated to zero increment.
/// Without it, only the nearest point per side is used. Levels are refined until successive
/// estimates stop improving.
struct DerivativeConfig {
  int min_level = 4;
  int max_level = -1;  // -1: staircase depth - 2
  int samples = 5;     // stencil points per side
  int degree = 8;      // fit degree
  bool richardson = true;
  double tolerance = 1e-6;       // relative bound on the extrapolation error estimate
  double side_tolerance = 1e-5;  // relative left/right disagreement that flags a kink
};

/// F^alpha-derivative at x. Returns 0 off the set. Throws NonDifferentiableError when the
/// quotient sequence fails to settle or the one-sided limits disagree.
double f_alpha_derivative(const FractalFn& f, double x, const DerivativeConfig& cfg = {});

/// The raw fractal function x -> D f(x), for iterating derivatives.
FractalFn derivative_fn(const FractalFn& f, DerivativeConfig cfg = {});

struct IntegralResult {
  double value;
  std::optional<double> lower;  // present when f is monotone along the set
  std::optional<double> upper;
};

inline constexpr std::size_t kDefaultCells = std::size_t{1} << 14;

/// F^alpha-integral over [a, b] by the substitution u = S(x): an n-cell midpoint rule on
/// [S(a), S(b)] with the integrand sampled at pseudoinverse(u). Reversed limits flip the sign.
IntegralResult f_alpha_integral(const FractalFn& f, double a, double b, std::size_t n = kDefaultCells);

/// Midpoint value only, without the monotone bracket.
double f_alpha_integral_value(const FractalFn& f, double a, double b, std::size_t n = kDefaultCells);

}  // namespace fractalcalc
