#pragma once

#include <complex>
#include <vector>

namespace fractalcalc {

/// Z(r) = a_0 r^n + a_1 r^{n-1} + ... + a_n, coefficients highest power first.
struct CharPolynomial {
  std::vector<double> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Throws DegenerateOrderError unless degree >= 1 and a_0 != 0.
  void validate() const;
  /// d^order Z / dr^order at r.
  std::complex<double> eval(std::complex<double> r, int order = 0) const;
};

struct Root {
  std::complex<double> value;
  int multiplicity;
};

/// Distinct roots sorted by (real, imag); conjugate pairs carry equal multiplicities.
struct RootSet {
  std::vector<Root> roots;

  int total_multiplicity() const;
};

inline constexpr double kDefaultClusterTol = 1e-7;

/// All roots of z via companion-matrix eigenvalues, grouped into multiple roots and polished.
///
/// Nearby eigenvalues are grouped hierarchically; a group of size s is accepted as one s-fold
/// root when Newton on Z^{(s-1)} from the group centroid lands on a point where Z, ..., Z^{(s-2)}
/// also vanish to round-off. Groups that fail are split, down to the plain rule of merging
/// roots within cluster_tol * max(1, |r|).
RootSet find_roots(const CharPolynomial& z, double cluster_tol = kDefaultClusterTol);

/// Real coefficients of leading * prod (r - r_i)^{m_i}, highest power first.
std::vector<double> expand(const RootSet& roots, double leading);

}  // namespace fractalcalc
