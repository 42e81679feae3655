#include "fractalcalc/fode.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

ClassicalForcing builtin_forcing(const std::string& name) {
  if (name == "zero") return {name, [](double) { return 0.0; }};
  if (name == "exp") return {name, [](double t) { return std::exp(t); }};
  if (name == "cos2") return {name, [](double t) { return std::cos(2.0 * t); }};
  if (name == "inv_square_exp") return {name, [](double t) { return std::exp(t) / (t * t); }, 1e-3};
  throw UnsupportedForcingError("unknown forcing expression '" + name + "'");
}

QuasiPolynomial ForcingTerm::as_quasi() const {
  if (expr) {
    throw UnsupportedForcingError("forcing '" + expr->name +
                                  "' is not an atom sum; use variation_of_parameters");
  }
  QuasiPolynomial q;
  for (const auto& atom : atoms) {
    if ((atom.trig == Trig::none) != (atom.mu == 0.0)) {
      throw InputError("forcing atom: trig = none exactly when mu = 0");
    }
    ExpTrigTerm term{atom.lambda, atom.mu, {}, {}};
    (atom.trig == Trig::sin ? term.sin_poly : term.cos_poly) = atom.poly;
    q += QuasiPolynomial({term});
  }
  return q;
}

double ForcingTerm::eval(double t) const { return expr ? expr->g(t) : as_quasi().eval(t); }

void FODEProblem::validate() const {
  if (coeffs.size() < 2) throw DegenerateOrderError("problem order n must be at least 1");
  if (coeffs.front() == 0.0) throw DegenerateOrderError("leading coefficient a_0 must be nonzero");
  if (order() > max_order) {
    throw InputError("problem order " + std::to_string(order()) + " exceeds the supported maximum " +
                     std::to_string(max_order));
  }
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw InputError("non-finite equation coefficient");
  }
  if (ics && static_cast<int>(ics->size()) != order()) {
    throw InputError("expected " + std::to_string(order()) + " initial values, got " + std::to_string(ics->size()));
  }
  if (!staircase.contains(x0)) throw DomainError("anchor x0 must lie in the fractal set");
  if (forcing && forcing->is_atomic()) (void)forcing->as_quasi();
  if (cells == 0) throw InputError("quadrature cells must be positive");
}

CharPolynomial characteristic_polynomial(const FODEProblem& p) {
  CharPolynomial z{p.coeffs};
  z.validate();
  return z;
}

std::vector<BasisFn> basis_functions(const RootSet& roots) {
  std::vector<BasisFn> basis;
  for (const auto& root : roots.roots) {
    const double lambda = root.value.real();
    const double mu = root.value.imag();
    if (mu < 0.0) continue;  // the conjugate with mu > 0 carries the pair
    for (int k = 0; k < root.multiplicity; ++k) {
      if (mu == 0.0) {
        basis.push_back({k, lambda, 0.0, Trig::none});
      } else {
        basis.push_back({k, lambda, mu, Trig::cos});
        basis.push_back({k, lambda, mu, Trig::sin});
      }
    }
  }
  return basis;
}

Eigen::MatrixXd derivative_matrix(std::span<const BasisFn> basis, double t, int rows) {
  Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    QuasiPolynomial q = basis[i].as_quasi();
    for (int j = 0; j < rows; ++j) {
      m(j, static_cast<Eigen::Index>(i)) = q.eval(t);
      q = q.derivative();
    }
  }
  return m;
}

double wronskian(std::span<const BasisFn> basis, double t) {
  if (basis.empty()) return 1.0;
  return derivative_matrix(basis, t, static_cast<int>(basis.size())).determinant();
}

double wronskian_minor(std::span<const BasisFn> basis, double t, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (m >= basis.size()) throw InputError("wronskian_minor: column index out of range");
  Eigen::MatrixXd w = derivative_matrix(basis, t, static_cast<int>(n));
  w.col(static_cast<Eigen::Index>(m)).setZero();
  w(n - 1, static_cast<Eigen::Index>(m)) = 1.0;
  return w.determinant();
}

// ---- variation of parameters -------------------------------------------------------------

VopParticular VopParticular::make(std::vector<BasisFn> basis, double leading, ClassicalForcing forcing, double x0,
                                  std::size_t cells) {
  VopParticular v{std::move(basis), leading, std::move(forcing), x0, cells, {}};
  const int n = static_cast<int>(v.basis.size());
  for (const auto& b : v.basis) {
    std::vector<QuasiPolynomial> row{b.as_quasi()};
    for (int j = 0; j < n; ++j) row.push_back(row.back().derivative());
    v.derivatives.push_back(std::move(row));
  }
  return v;
}

Eigen::VectorXd VopParticular::kernels(double t) const {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      w(j, i) = derivatives[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].eval(t);
    }
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(w);
  const double det = lu.determinant();
  if (det == 0.0 || !std::isfinite(det)) throw DependentBasisError("variation of parameters: singular Wronskian");
  // Cramer: W_m / W is component m of W^{-1} e_n.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = forcing.g(t) / leading;
  return lu.solve(rhs);
}

double VopParticular::kernel(std::size_t m, double t) const { return kernels(t)(static_cast<Eigen::Index>(m)); }

namespace {

void check_range(const ClassicalForcing& forcing, double t) {
  if (t < forcing.t_min) {
    throw IntegrandError("variation of parameters: integration range reaches below t_min of forcing '" +
                         forcing.name + "'");
  }
}

}  // namespace

// Midpoint rule in u = S over `cells` cells, integrand sampled at pseudoinverse(u) as in
// f_alpha_integral_value, for all kernels at once.
Eigen::VectorXd VopParticular::integrate(double t_from, double t_to, std::size_t n_cells, const Staircase& s) const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  const double du = (t_to - t_from) / static_cast<double>(n_cells);
  if (du == 0.0) return sum;
  for (std::size_t i = 0; i < n_cells; ++i) {
    const double t = s.eval(s.pseudoinverse(t_from + (static_cast<double>(i) + 0.5) * du));
    const Eigen::VectorXd k = kernels(t);
    if (!k.allFinite()) throw IntegrandError("variation of parameters: integrand is not finite on the range");
    sum += k;
  }
  return sum * du;
}

std::vector<double> VopParticular::integrals(double x, const Staircase& s) const {
  const double t0 = s.eval(x0);
  const double t = s.eval(x);
  check_range(forcing, std::min(t0, t));
  const Eigen::VectorXd v = integrate(t0, t, cells, s);
  return {v.data(), v.data() + v.size()};
}

double VopParticular::integral(std::size_t m, double x, const Staircase& s) const { return integrals(x, s).at(m); }

double VopParticular::structural(int j, double x, const Staircase& s) const {
  return combine(j, s.eval(x), integrals(x, s));
}

std::vector<double> VopParticular::integrals_from(double y, double x, std::span<const double> at_x,
                                                  const Staircase& s) const {
  const double t0 = s.eval(x0);
  const double tx = s.eval(x);
  const double ty = s.eval(y);
  check_range(forcing, std::min({t0, tx, ty}));
  double step = std::abs(tx - t0) / static_cast<double>(cells);
  if (step == 0.0) step = (s.upper() - s.lower()) / static_cast<double>(cells);
  const auto n = static_cast<std::size_t>(std::max(8.0, std::ceil(std::abs(ty - tx) / step)));
  const Eigen::VectorXd delta = integrate(tx, ty, n, s);
  std::vector<double> out(at_x.begin(), at_x.end());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] += delta(static_cast<Eigen::Index>(m));
  return out;
}

double VopParticular::combine(int j, double t, std::span<const double> in) const {
  double sum = 0.0;
  for (std::size_t m = 0; m < basis.size(); ++m) sum += derivatives[m][static_cast<std::size_t>(j)].eval(t) * in[m];
  return sum;
}

// ---- solutions ---------------------------------------------------------------------------

std::vector<double> FODESolution::effective_coeffs() const {
  return hom_coeffs.value_or(std::vector<double>(basis.size(), 1.0));
}

QuasiPolynomial FODESolution::closed_form() const {
  QuasiPolynomial q;
  const auto c = effective_coeffs();
  for (std::size_t i = 0; i < basis.size(); ++i) q += c[i] * basis[i].as_quasi();
  if (const auto* uc = std::get_if<QuasiPolynomial>(&particular)) q += *uc;
  return q;
}

double FODESolution::operator()(double x) const {
  double v = closed_form().eval(staircase.eval(x));
  if (const auto* vop = std::get_if<VopParticular>(&particular)) v += vop->value(x, staircase);
  return v;
}

FractalFn FODESolution::as_fractal_fn() const {
  return FractalFn::raw([sol = *this](double x) { return sol(x); }, staircase);
}

namespace {

std::optional<int> resonance(const RootSet& roots, double lambda, double mu) {
  const std::complex<double> z(lambda, mu);
  for (const auto& r : roots.roots) {
    if (std::abs(r.value - z) <= 1e-6 * std::max(1.0, std::abs(z))) return r.multiplicity;
  }
  return std::nullopt;
}

QuasiPolynomial apply_operator(std::span<const double> coeffs, const QuasiPolynomial& f) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  QuasiPolynomial out;
  QuasiPolynomial d = f;
  for (int j = 0; j <= n; ++j) {
    out += coeffs[static_cast<std::size_t>(n - j)] * d;
    d = d.derivative();
  }
  return out;
}

// Coefficients of e^{lambda t}(P cos + Q sin) packed as [P_0..P_D, Q_0..Q_D].
Eigen::VectorXd pack(const QuasiPolynomial& q, double lambda, double mu, std::size_t degree_cap) {
  const std::size_t width = degree_cap + 1;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mu == 0.0 ? width : 2 * width));
  for (const auto& term : q.terms()) {
    if (term.lambda != lambda || term.mu != mu) {
      throw NumericError("undetermined coefficients: operator image left the forcing family");
    }
    for (std::size_t i = 0; i < term.cos_poly.size() && i < width; ++i) v(static_cast<Eigen::Index>(i)) = term.cos_poly[i];
    for (std::size_t i = 0; i < term.sin_poly.size() && i < width; ++i) {
      v(static_cast<Eigen::Index>(width + i)) = term.sin_poly[i];
    }
  }
  return v;
}

}  // namespace

QuasiPolynomial undetermined_coefficients(const FODEProblem& p) {
  p.validate();
  if (!p.forcing) return {};
  const QuasiPolynomial g = p.forcing->as_quasi();
  const RootSet roots = find_roots(characteristic_polynomial(p));

  QuasiPolynomial particular;
  for (const auto& term : g.terms()) {
    const std::size_t degree = std::max(term.cos_poly.size(), term.sin_poly.size()) - 1;
    const int s = resonance(roots, term.lambda, term.mu).value_or(0);
    const Trig first = term.mu == 0.0 ? Trig::none : Trig::cos;

    std::vector<QuasiPolynomial> unknowns;
    for (std::size_t i = 0; i <= degree; ++i) {
      const int power = s + static_cast<int>(i);
      unknowns.push_back(QuasiPolynomial::monomial(power, term.lambda, term.mu, first));
      if (term.mu != 0.0) unknowns.push_back(QuasiPolynomial::monomial(power, term.lambda, term.mu, Trig::sin));
    }
    // Images under L can carry round-off in degrees above the forcing's; keep them as rows.
    const std::size_t cap = degree + static_cast<std::size_t>(s) + static_cast<std::size_t>(p.order());
    const Eigen::VectorXd rhs = pack(QuasiPolynomial({term}), term.lambda, term.mu, cap);
    Eigen::MatrixXd a(rhs.size(), static_cast<Eigen::Index>(unknowns.size()));
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      a.col(static_cast<Eigen::Index>(u)) = pack(apply_operator(p.coeffs, unknowns[u]), term.lambda, term.mu, cap);
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    if ((a * sol - rhs).norm() > 1e-9 * std::max(1.0, rhs.norm())) {
      throw NumericError("undetermined coefficients: ansatz system is inconsistent");
    }
    for (std::size_t u = 0; u < unknowns.size(); ++u) particular += sol(static_cast<Eigen::Index>(u)) * unknowns[u];
  }
  return particular;
}

double variation_of_parameters(const FODEProblem& p, double x) {
  p.validate();
  if (!p.forcing) return 0.0;
  const ClassicalForcing g =
      p.forcing->expr ? *p.forcing->expr
                      : ClassicalForcing{"atoms", [q = p.forcing->as_quasi()](double t) { return q.eval(t); }};
  const auto basis = basis_functions(find_roots(characteristic_polynomial(p)));
  return VopParticular::make(basis, p.coeffs.front(), g, p.x0, p.cells).value(x, p.staircase);
}

namespace {

// Particular-part derivatives at x0, for the initial-value system.
double particular_derivative_at(const Particular& particular, int j, double x0, const Staircase& s) {
  if (const auto* uc = std::get_if<QuasiPolynomial>(&particular)) return uc->derivative(j).eval(s.eval(x0));
  if (const auto* vop = std::get_if<VopParticular>(&particular)) return vop->structural(j, x0, s);
  return 0.0;
}

void fit_initial_values(FODESolution& sol, const FODEProblem& p) {
  const int n = p.order();
  const double t0 = p.staircase.eval(p.x0);
  const Eigen::MatrixXd m = derivative_matrix(sol.basis, t0, n);
  double scale = 1.0;
  for (Eigen::Index i = 0; i < m.cols(); ++i) scale *= std::max(m.col(i).norm(), 1e-300);
  const double det = m.determinant();
  if (!(std::abs(det) > 1e-12 * scale)) {
    throw DependentBasisError("initial-value system is singular (Wronskian vanishes at x0)");
  }
  Eigen::VectorXd rhs(n);
  for (int j = 0; j < n; ++j) {
    rhs(j) = (*p.ics)[static_cast<std::size_t>(j)] - particular_derivative_at(sol.particular, j, p.x0, p.staircase);
  }
  const Eigen::VectorXd c = m.fullPivLu().solve(rhs);
  sol.hom_coeffs = std::vector<double>(c.data(), c.data() + c.size());
}

}  // namespace

FODESolution solve(const FODEProblem& p) {
  p.validate();
  const RootSet roots = find_roots(characteristic_polynomial(p));
  FODESolution sol{basis_functions(roots), std::nullopt, std::monostate{}, p.staircase, p.coeffs};
  if (p.forcing) {
    if (p.forcing->is_atomic()) {
      sol.particular = undetermined_coefficients(p);
    } else {
      sol.particular = VopParticular::make(sol.basis, p.coeffs.front(), *p.forcing->expr, p.x0, p.cells);
    }
  }
  if (p.ics) fit_initial_values(sol, p);
  return sol;
}

FODESolution solve_homogeneous_ivp(const FODEProblem& p) {
  if (!p.ics) throw InputError("solve_homogeneous_ivp: initial values are required");
  if (p.forcing) throw InputError("solve_homogeneous_ivp: problem has a forcing term; use solve()");
  return solve(p);
}

double residual(const FODESolution& sol, const FODEProblem& p, double x) {
  const Staircase& s = sol.staircase;
  if (!s.contains(x)) throw DomainError("residual: x must lie in the fractal set");
  const double t = s.eval(x);
  const int n = static_cast<int>(p.coeffs.size()) - 1;
  double lhs = apply_operator(p.coeffs, sol.closed_form()).eval(t);
  if (const auto* vop = std::get_if<VopParticular>(&sol.particular)) {
    DerivativeConfig cfg;
    cfg.tolerance = 1e-3;
    cfg.min_level = 6;  // the quadrature-backed part is smooth in t; short stencils are cheaper
    // Keep the stencil on the side of t_min where the forcing is integrable.
    const double room = std::min(t, s.eval(vop->x0)) - vop->forcing.t_min;
    if (std::isfinite(room)) {
      const double m = geometry(s.spec()).branches;
      const double reach = 2.0 * cfg.samples * (s.upper() - s.lower()) / room;
      cfg.min_level = std::max(cfg.min_level, static_cast<int>(std::ceil(std::log(reach) / std::log(m))));
    }
    const auto at_x = vop->integrals(x, s);
    // Every order differentiates on the same stencil, so the continued integrals are shared.
    std::vector<std::pair<double, std::vector<double>>> seen;
    auto integrals_at = [&](double y) -> const std::vector<double>& {
      for (const auto& [k, v] : seen) {
        if (k == y) return v;
      }
      seen.emplace_back(y, vop->integrals_from(y, x, at_x, s));
      return seen.back().second;
    };
    for (int j = 0; j <= n; ++j) {
      double dj = 0.0;
      if (j == 0) {
        dj = vop->combine(0, t, at_x);
      } else {
        const auto lower =
            FractalFn::raw([&, j](double y) { return vop->combine(j - 1, s.eval(y), integrals_at(y)); }, s);
        dj = f_alpha_derivative(lower, x, cfg);
      }
      lhs += p.coeffs[static_cast<std::size_t>(n - j)] * dj;
    }
  }
  const double g = p.forcing ? p.forcing->eval(t) : 0.0;
  return std::abs(lhs - g);
}

double ic_mismatch(const FODESolution& sol, const FODEProblem& p) {
  if (!p.ics) return 0.0;
  const double t0 = sol.staircase.eval(p.x0);
  QuasiPolynomial d = sol.closed_form();
  double worst = 0.0;
  for (int j = 0; j < p.order(); ++j) {
    const double v = d.eval(t0) + (sol.has_quadrature_part()
                                       ? particular_derivative_at(sol.particular, j, p.x0, sol.staircase)
                                       : 0.0);
    worst = std::max(worst, std::abs(v - (*p.ics)[static_cast<std::size_t>(j)]));
    d = d.derivative();
  }
  return worst;
}

std::vector<double> project_out_homogeneous(std::span<const BasisFn> basis, std::span<const double> ts,
                                            std::span<const double> values) {
  if (ts.size() != values.size()) throw InputError("project_out_homogeneous: size mismatch");
  const auto rows = static_cast<Eigen::Index>(ts.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    b(i) = values[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < cols; ++k) a(i, k) = basis[static_cast<std::size_t>(k)].eval(ts[static_cast<std::size_t>(i)]);
  }
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd rem = b - a * c;
  return {rem.data(), rem.data() + rem.size()};
}

}  // namespace fractalcalc
