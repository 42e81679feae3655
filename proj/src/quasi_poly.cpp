#include "fractalcalc/quasi_poly.hpp"

#include <algorithm>
#include <cmath>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

std::string to_string(Trig trig) {
  switch (trig) {
    case Trig::none: return "none";
    case Trig::cos: return "cos";
    case Trig::sin: return "sin";
  }
  return "none";
}

Trig parse_trig(const std::string& text) {
  if (text == "none") return Trig::none;
  if (text == "cos") return Trig::cos;
  if (text == "sin") return Trig::sin;
  throw InputError("unknown trig kind '" + text + "' (expected none, cos or sin)");
}

namespace {

double horner(const std::vector<double>& p, double t) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
  return acc;
}

std::vector<double> poly_derivative(const std::vector<double>& p) {
  if (p.size() <= 1) return {};
  std::vector<double> d(p.size() - 1);
  for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = static_cast<double>(i) * p[i];
  return d;
}

// a*p + b*q + c*r, sized to the longest operand.
std::vector<double> combine(double a, const std::vector<double>& p, double b, const std::vector<double>& q,
                            double c, const std::vector<double>& r) {
  std::vector<double> out(std::max({p.size(), q.size(), r.size()}), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) out[i] += a * p[i];
  for (std::size_t i = 0; i < q.size(); ++i) out[i] += b * q[i];
  for (std::size_t i = 0; i < r.size(); ++i) out[i] += c * r[i];
  return out;
}

void trim(std::vector<double>& p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
}

}  // namespace

double ExpTrigTerm::eval(double t) const {
  double v = horner(cos_poly, t);
  if (mu != 0.0) v = v * std::cos(mu * t) + horner(sin_poly, t) * std::sin(mu * t);
  return lambda == 0.0 ? v : std::exp(lambda * t) * v;
}

ExpTrigTerm ExpTrigTerm::derivative() const {
  // d/dt e^{lt}(P cos + Q sin) = e^{lt}((lP + P' + mQ) cos + (lQ + Q' - mP) sin)
  ExpTrigTerm d{lambda, mu, {}, {}};
  d.cos_poly = combine(lambda, cos_poly, 1.0, poly_derivative(cos_poly), mu, sin_poly);
  if (mu != 0.0) d.sin_poly = combine(lambda, sin_poly, 1.0, poly_derivative(sin_poly), -mu, cos_poly);
  return d;
}

QuasiPolynomial::QuasiPolynomial(std::vector<ExpTrigTerm> terms) : terms_(std::move(terms)) { normalize(); }

QuasiPolynomial QuasiPolynomial::monomial(int k, double lambda, double mu, Trig trig, double coeff) {
  if (k < 0) throw InputError("QuasiPolynomial::monomial: negative power");
  if ((trig == Trig::none) != (mu == 0.0)) {
    throw InputError("QuasiPolynomial::monomial: trig = none exactly when mu = 0");
  }
  std::vector<double> p(static_cast<std::size_t>(k) + 1, 0.0);
  p.back() = coeff;
  ExpTrigTerm term{lambda, mu, {}, {}};
  if (trig == Trig::sin) {
    term.sin_poly = std::move(p);
  } else {
    term.cos_poly = std::move(p);
  }
  return QuasiPolynomial({term});
}

double QuasiPolynomial::eval(double t) const {
  double v = 0.0;
  for (const auto& term : terms_) v += term.eval(t);
  return v;
}

QuasiPolynomial QuasiPolynomial::derivative(int order) const {
  QuasiPolynomial out = *this;
  for (int k = 0; k < order; ++k) {
    for (auto& term : out.terms_) term = term.derivative();
    out.normalize();
  }
  return out;
}

QuasiPolynomial& QuasiPolynomial::operator+=(const QuasiPolynomial& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  normalize();
  return *this;
}

QuasiPolynomial& QuasiPolynomial::operator*=(double s) {
  for (auto& term : terms_) {
    for (auto& c : term.cos_poly) c *= s;
    for (auto& c : term.sin_poly) c *= s;
  }
  normalize();
  return *this;
}

void QuasiPolynomial::normalize() {
  for (auto& term : terms_) {
    if (term.mu < 0.0) {
      // sin is odd: flip Q so the pair (lambda, mu) is canonical with mu >= 0.
      term.mu = -term.mu;
      for (auto& c : term.sin_poly) c = -c;
    }
    if (term.mu == 0.0) term.sin_poly.clear();
  }
  std::stable_sort(terms_.begin(), terms_.end(), [](const ExpTrigTerm& x, const ExpTrigTerm& y) {
    return x.lambda != y.lambda ? x.lambda < y.lambda : x.mu < y.mu;
  });
  std::vector<ExpTrigTerm> merged;
  for (auto& term : terms_) {
    if (!merged.empty() && merged.back().lambda == term.lambda && merged.back().mu == term.mu) {
      auto& dst = merged.back();
      dst.cos_poly = combine(1.0, dst.cos_poly, 1.0, term.cos_poly, 0.0, {});
      dst.sin_poly = combine(1.0, dst.sin_poly, 1.0, term.sin_poly, 0.0, {});
    } else {
      merged.push_back(std::move(term));
    }
  }
  for (auto& term : merged) {
    trim(term.cos_poly);
    trim(term.sin_poly);
  }
  std::erase_if(merged, [](const ExpTrigTerm& t) { return t.cos_poly.empty() && t.sin_poly.empty(); });
  terms_ = std::move(merged);
}

}  // namespace fractalcalc
