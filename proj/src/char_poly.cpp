#include "fractalcalc/char_poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

using cplx = std::complex<double>;

void CharPolynomial::validate() const {
  if (coeffs.size() < 2) throw DegenerateOrderError("characteristic polynomial needs degree >= 1");
  if (coeffs.front() == 0.0) throw DegenerateOrderError("leading coefficient a_0 must be nonzero");
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw InputError("characteristic polynomial has a non-finite coefficient");
  }
}

cplx CharPolynomial::eval(cplx r, int order) const {
  const int n = degree();
  cplx acc = 0.0;
  for (int i = 0; i <= n - order; ++i) {
    // term a_i r^{n-i}; its order-th derivative has falling factorial (n-i)!/(n-i-order)!
    double ff = 1.0;
    for (int k = 0; k < order; ++k) ff *= static_cast<double>(n - i - k);
    acc = acc * r + coeffs[static_cast<std::size_t>(i)] * ff;
  }
  return acc;
}

int RootSet::total_multiplicity() const {
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  return total;
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double scale_of(cplx z) { return std::max(1.0, std::abs(z)); }

// |a_i| evaluated at |r|: round-off scale of Z^{(order)} near r.
double magnitude_bound(const CharPolynomial& z, double r, int order) {
  CharPolynomial abs_poly{z.coeffs};
  for (auto& c : abs_poly.coeffs) c = std::abs(c);
  return std::abs(abs_poly.eval(cplx(r, 0.0), order));
}

std::optional<cplx> newton(const CharPolynomial& z, cplx start, int order) {
  cplx x = start;
  for (int it = 0; it < 80; ++it) {
    const cplx d = z.eval(x, order + 1);
    if (std::abs(d) == 0.0) break;
    const cplx step = z.eval(x, order) / d;
    x -= step;
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return std::nullopt;
    if (std::abs(step) <= 4 * kEps * scale_of(x)) return x;
  }
  return std::abs(z.eval(x, order)) <= 1e3 * kEps * magnitude_bound(z, std::abs(x), order)
             ? std::optional<cplx>(x)
             : std::nullopt;
}

cplx centroid(const std::vector<cplx>& group) {
  cplx sum = 0.0;
  for (const auto& g : group) sum += g;
  return sum / static_cast<double>(group.size());
}

double spread(const std::vector<cplx>& group, cplx c) {
  double s = 0.0;
  for (const auto& g : group) s = std::max(s, std::abs(g - c));
  return s;
}

// Accept the group as one s-fold root if the lower derivatives vanish at the polished point.
std::optional<cplx> as_multiple_root(const CharPolynomial& z, const std::vector<cplx>& group) {
  const int s = static_cast<int>(group.size());
  const cplx c = centroid(group);
  const auto polished = newton(z, c, s - 1);
  if (!polished) return std::nullopt;
  if (std::abs(*polished - c) > 10.0 * spread(group, c) + 1e-10 * scale_of(c)) return std::nullopt;
  const double r = std::abs(*polished);
  for (int j = 0; j + 1 < s; ++j) {
    if (std::abs(z.eval(*polished, j)) > 1e-9 * magnitude_bound(z, r, j)) return std::nullopt;
  }
  return polished;
}

std::vector<std::vector<cplx>> link(const std::vector<cplx>& pts, double radius) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double tol = radius * std::max({1.0, std::abs(pts[i]), std::abs(pts[j])});
      if (std::abs(pts[i] - pts[j]) <= tol) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<cplx>> groups;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == n) {
      slot[root] = groups.size();
      groups.emplace_back();
    }
    groups[slot[root]].push_back(pts[i]);
  }
  return groups;
}

void resolve(const CharPolynomial& z, const std::vector<cplx>& group, double radius, double cluster_tol,
             std::vector<Root>& out) {
  const int s = static_cast<int>(group.size());
  if (s == 1) {
    out.push_back({newton(z, group.front(), 0).value_or(group.front()), 1});
    return;
  }
  if (const auto root = as_multiple_root(z, group)) {
    out.push_back({*root, s});
    return;
  }
  if (radius <= cluster_tol) {
    const cplx c = centroid(group);
    out.push_back({newton(z, c, s - 1).value_or(c), s});
    return;
  }
  const double next = std::max(radius / 10.0, cluster_tol);
  for (const auto& sub : link(group, next)) resolve(z, sub, next, cluster_tol, out);
}

}  // namespace

RootSet find_roots(const CharPolynomial& z, double cluster_tol) {
  z.validate();
  if (!(cluster_tol > 0.0)) throw InputError("find_roots: cluster_tol must be positive");
  const int n = z.degree();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -z.coeffs[static_cast<std::size_t>(j + 1)] / z.coeffs[0];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericError("find_roots: eigenvalue iteration failed");
  std::vector<cplx> raw(solver.eigenvalues().begin(), solver.eigenvalues().end());

  std::vector<Root> found;
  constexpr double kStartRadius = 1e-2;
  for (const auto& group : link(raw, kStartRadius)) {
    resolve(z, group, kStartRadius, cluster_tol, found);
  }

  for (auto& r : found) {
    if (std::abs(r.value.imag()) <= 1e-9 * scale_of(r.value)) {
      const cplx real_start(r.value.real(), 0.0);
      const auto polished = newton(z, real_start, r.multiplicity - 1);
      r.value = cplx(polished ? polished->real() : r.value.real(), 0.0);
    }
  }

  // Pair conjugates exactly.
  std::vector<bool> used(found.size(), false);
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (used[i] || found[i].value.imag() <= 0.0) continue;
    std::size_t best = found.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < found.size(); ++j) {
      if (used[j] || j == i || found[j].value.imag() >= 0.0) continue;
      const double d = std::abs(found[j].value - std::conj(found[i].value));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == found.size() || found[best].multiplicity != found[i].multiplicity) {
      throw NumericError("find_roots: complex roots do not pair into conjugates");
    }
    used[i] = used[best] = true;
    const cplx mean = 0.5 * (found[i].value + std::conj(found[best].value));
    found[i].value = mean;
    found[best].value = std::conj(mean);
  }
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (!used[i] && found[i].value.imag() != 0.0) throw NumericError("find_roots: unpaired complex root");
  }

  std::sort(found.begin(), found.end(), [](const Root& a, const Root& b) {
    return a.value.real() != b.value.real() ? a.value.real() < b.value.real() : a.value.imag() < b.value.imag();
  });
  RootSet out{std::move(found)};
  if (out.total_multiplicity() != n) throw NumericError("find_roots: multiplicities do not sum to the degree");
  return out;
}

std::vector<double> expand(const RootSet& roots, double leading) {
  std::vector<cplx> poly{cplx(leading, 0.0)};  // highest power first
  for (const auto& root : roots.roots) {
    for (int k = 0; k < root.multiplicity; ++k) {
      std::vector<cplx> next(poly.size() + 1, 0.0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i] += poly[i];
        next[i + 1] -= poly[i] * root.value;
      }
      poly = std::move(next);
    }
  }
  std::vector<double> out(poly.size());
  std::transform(poly.begin(), poly.end(), out.begin(), [](cplx c) { return c.real(); });
  return out;
}

}  // namespace fractalcalc
