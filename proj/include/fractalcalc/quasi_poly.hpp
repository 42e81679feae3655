#pragma once

#include <string>
#include <vector>

namespace fractalcalc {

enum class Trig { none, cos, sin };

std::string to_string(Trig trig);
Trig parse_trig(const std::string& text);

/// e^{lambda t} (P(t) cos(mu t) + Q(t) sin(mu t)), with P and Q in ascending powers of t.
/// When mu == 0 the sine part is identically zero and is kept empty.
struct ExpTrigTerm {
  double lambda = 0.0;
  double mu = 0.0;
  std::vector<double> cos_poly;
  std::vector<double> sin_poly;

  double eval(double t) const;
  ExpTrigTerm derivative() const;
};

/// Finite sum of ExpTrigTerm with distinct (lambda, mu). Closed under differentiation, which
/// is what the solver uses for exact Wronskians, residuals and undetermined coefficients.
class QuasiPolynomial {
 public:
  QuasiPolynomial() = default;
  explicit QuasiPolynomial(std::vector<ExpTrigTerm> terms);

  /// coeff * t^k e^{lambda t} {1 | cos(mu t) | sin(mu t)}.
  static QuasiPolynomial monomial(int k, double lambda, double mu, Trig trig, double coeff = 1.0);

  double eval(double t) const;
  QuasiPolynomial derivative(int order = 1) const;

  QuasiPolynomial& operator+=(const QuasiPolynomial& other);
  QuasiPolynomial& operator*=(double s);
  friend QuasiPolynomial operator+(QuasiPolynomial lhs, const QuasiPolynomial& rhs) { return lhs += rhs; }
  friend QuasiPolynomial operator*(double s, QuasiPolynomial q) { return q *= s; }

  const std::vector<ExpTrigTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

 private:
  void normalize();

  std::vector<ExpTrigTerm> terms_;
};

}  // namespace fractalcalc
