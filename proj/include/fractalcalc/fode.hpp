#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fractalcalc/calculus.hpp"
#include "fractalcalc/char_poly.hpp"
#include "fractalcalc/quasi_poly.hpp"
#include "fractalcalc/staircase.hpp"

namespace fractalcalc {

/// t^k e^{lambda t} {1 | cos(mu t) | sin(mu t)}, evaluated in the staircase coordinate t = S(x).
struct BasisFn {
  int k = 0;
  double lambda = 0.0;
  double mu = 0.0;
  Trig trig = Trig::none;

  QuasiPolynomial as_quasi() const { return QuasiPolynomial::monomial(k, lambda, mu, trig); }
  double eval(double t) const { return as_quasi().eval(t); }
  /// j-th derivative in t, by closed-form differentiation.
  double derivative(int j, double t) const { return as_quasi().derivative(j).eval(t); }

  bool operator==(const BasisFn&) const = default;
};

/// poly(t) e^{lambda t} {1 | cos(mu t) | sin(mu t)}; poly in ascending powers of t.
struct ForcingAtom {
  std::vector<double> poly;
  double lambda = 0.0;
  double mu = 0.0;
  Trig trig = Trig::none;
};

/// An arbitrary classical forcing g(t), for variation of parameters. Integration ranges must
/// stay at or above t_min (positive when g is singular at 0).
struct ClassicalForcing {
  std::string name;
  RealFn g;
  double t_min = -std::numeric_limits<double>::infinity();
};

/// Named forcings accepted in problem files: "zero", "exp", "cos2", "inv_square_exp"
/// (t^-2 e^t, singular at 0).
ClassicalForcing builtin_forcing(const std::string& name);

struct ForcingTerm {
  std::vector<ForcingAtom> atoms;
  std::optional<ClassicalForcing> expr;

  bool is_atomic() const { return !expr.has_value(); }
  double eval(double t) const;
  /// Atom sum as a quasi-polynomial; throws UnsupportedForcingError for expr forcings.
  QuasiPolynomial as_quasi() const;
};

/// a_0 D^{n alpha} f + a_1 D^{(n-1) alpha} f + ... + a_n f = g(S(x)), with initial values
/// f(x0), D^alpha f(x0), ..., D^{(n-1) alpha} f(x0) at an anchor x0 in F.
struct FODEProblem {
  std::vector<double> coeffs;
  std::optional<ForcingTerm> forcing;
  std::optional<std::vector<double>> ics;
  double x0 = 0.0;
  Staircase staircase{CantorSpec::triadic()};
  std::size_t cells = kDefaultCells;  // quadrature cells for variation of parameters
  int max_order = 10;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Throws DegenerateOrderError / InputError / DomainError on invariant violations.
  void validate() const;
};

CharPolynomial characteristic_polynomial(const FODEProblem& p);

/// Real fundamental set: t^k e^{lambda t} per real root, t^k e^{lambda t} cos/sin(mu t) per
/// conjugate pair lambda +- i mu; roots by (Re, Im), k ascending, cos before sin.
std::vector<BasisFn> basis_functions(const RootSet& roots);

/// (j, i) entry: j-th t-derivative of basis i at t, for j = 0..rows-1.
Eigen::MatrixXd derivative_matrix(std::span<const BasisFn> basis, double t, int rows);

double wronskian(std::span<const BasisFn> basis, double t);

/// W with column m (0-based) replaced by (0, ..., 0, 1)^T.
double wronskian_minor(std::span<const BasisFn> basis, double t, std::size_t m);

/// F(x) = sum_m f_m(S(x)) * integral_{x0}^{x} g W_m / (a_0 W) d_F s, integrals by fractal
/// quadrature in the staircase coordinate.
struct VopParticular {
  std::vector<BasisFn> basis;
  double leading = 1.0;
  ClassicalForcing forcing;
  double x0 = 0.0;
  std::size_t cells = kDefaultCells;
  std::vector<std::vector<QuasiPolynomial>> derivatives;  // [i][j] = D^j basis_i, j = 0..n

  static VopParticular make(std::vector<BasisFn> basis, double leading, ClassicalForcing forcing, double x0,
                            std::size_t cells);

  /// Integrand g W_m / (a_0 W) in t.
  double kernel(std::size_t m, double t) const;
  /// All n integrands at t, from one linear solve.
  Eigen::VectorXd kernels(double t) const;
  /// The integral I_m(x).
  double integral(std::size_t m, double x, const Staircase& s) const;
  /// I_0(x), ..., I_{n-1}(x) in one quadrature pass.
  std::vector<double> integrals(double x, const Staircase& s) const;
  /// sum_m f_m^{(j)}(S(x)) I_m(x); equals D^{j alpha} F(x) for j < n.
  double structural(int j, double x, const Staircase& s) const;
  /// I_m(y), continuing the known integrals `at_x` = I_m(x) from x to y with the cell width of
  /// the full range. Cheap for y near x.
  std::vector<double> integrals_from(double y, double x, std::span<const double> at_x, const Staircase& s) const;
  /// sum_m f_m^{(j)}(t) in[m].
  double combine(int j, double t, std::span<const double> in) const;
  double value(double x, const Staircase& s) const { return structural(0, x, s); }

 private:
  Eigen::VectorXd integrate(double t_from, double t_to, std::size_t n_cells, const Staircase& s) const;
};

using Particular = std::variant<std::monostate, QuasiPolynomial, VopParticular>;

struct FODESolution {
  std::vector<BasisFn> basis;
  std::optional<std::vector<double>> hom_coeffs;  // empty: general solution, c_i symbolic
  Particular particular;
  Staircase staircase;
  std::vector<double> coeffs;

  /// Homogeneous coefficients, or all ones for a general solution.
  std::vector<double> effective_coeffs() const;
  /// Homogeneous part plus any closed-form particular, as a function of t.
  QuasiPolynomial closed_form() const;
  bool has_quadrature_part() const { return std::holds_alternative<VopParticular>(particular); }

  double operator()(double x) const;
  FractalFn as_fractal_fn() const;
};

/// Particular solution by undetermined coefficients for atom forcings, with the t^s
/// resonance factor for forcing exponents that are characteristic roots of multiplicity s.
QuasiPolynomial undetermined_coefficients(const FODEProblem& p);

/// Particular solution value F(x) by variation of parameters anchored at p.x0.
double variation_of_parameters(const FODEProblem& p, double x);

/// Homogeneous problem with initial values: solves the collocation system at t0 = S(x0).
FODESolution solve_homogeneous_ivp(const FODEProblem& p);

/// Full pipeline: basis, particular (undetermined coefficients for atoms, variation of
/// parameters otherwise), then initial values when present.
FODESolution solve(const FODEProblem& p);

/// |L[f](x) - g(S(x))|, symbolic on closed-form parts, one fractal derivative per order on
/// quadrature-backed parts.
double residual(const FODESolution& sol, const FODEProblem& p, double x);

/// max_j |D^{j alpha} f(x0) - ics[j]|.
double ic_mismatch(const FODESolution& sol, const FODEProblem& p);

/// Least-squares removal of the span of `basis` from samples (ts[i], values[i]); returns the
/// remainder values.
std::vector<double> project_out_homogeneous(std::span<const BasisFn> basis, std::span<const double> ts,
                                            std::span<const double> values);

}  // namespace fractalcalc
