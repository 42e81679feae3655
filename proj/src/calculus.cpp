#include "fractalcalc/calculus.hpp"

#include <algorithm>
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

FractalFn::FractalFn(Form form, RealFn fn, Staircase staircase)
    : form_(form), fn_(std::move(fn)), staircase_(std::move(staircase)) {}

FractalFn FractalFn::conjugate(RealFn g, Staircase staircase) {
  return FractalFn(Form::conjugate, std::move(g), std::move(staircase));
}

FractalFn FractalFn::raw(RealFn h, Staircase staircase) {
  return FractalFn(Form::raw, std::move(h), std::move(staircase));
}

double FractalFn::operator()(double x) const {
  return form_ == Form::conjugate ? fn_(staircase_.eval(x)) : fn_(x);
}

FractalFn conjugate_lift(RealFn g, const Staircase& staircase) {
  return FractalFn::conjugate(std::move(g), staircase);
}

namespace {

struct Sample {
  double dt;  // S(y) - S(x)
  double df;  // f(y) - f(x)
};

// Least-squares fit of df = c_1 dt + ... + c_p dt^p; the quotient limit is c_1. Fitting in
// f-space keeps round-off in f(y) from being divided by the smallest increments.
double fit_slope(const std::vector<Sample>& pts, int degree) {
  const auto rows = static_cast<Eigen::Index>(pts.size());
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.dt));
  Eigen::MatrixXd a(rows, degree);
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double u = pts[static_cast<std::size_t>(i)].dt / scale;
    double pow = 1.0;
    for (int k = 0; k < degree; ++k) a(i, k) = (pow *= u);
    rhs(i) = pts[static_cast<std::size_t>(i)].df;
  }
  return a.colPivHouseholderQr().solve(rhs)(0) / scale;
}

// One estimate per level; the error of a level is its change from the previous one.
struct Track {
  double best = std::numeric_limits<double>::quiet_NaN();
  double error = std::numeric_limits<double>::infinity();
  double prev = std::numeric_limits<double>::quiet_NaN();
  int since_best = 0;
  bool done = false;

  // `floor`: change below which further refinement cannot help.
  void push(double est, double floor) {
    if (!std::isnan(prev)) {
      const double err = std::abs(est - prev);
      if (err <= error) {
        error = err;
        best = est;
        since_best = 0;
        if (err <= floor) done = true;
      } else if (++since_best >= 2) {
        done = true;  // round-off has taken over
      }
    } else {
      best = est;
    }
    prev = est;
  }
  bool active() const { return !std::isnan(prev); }
};

class CachedFn {
 public:
  explicit CachedFn(const FractalFn& f) : f_(f) {}
  double operator()(double x) {
    for (const auto& [k, v] : seen_) {
      if (k == x) return v;
    }
    const double v = f_(x);
    seen_.emplace_back(x, v);
    return v;
  }

 private:
  const FractalFn& f_;
  std::vector<std::pair<double, double>> seen_;
};

}  // namespace

double f_alpha_derivative(const FractalFn& f, double x, const DerivativeConfig& cfg) {
  const Staircase& s = f.staircase();
  if (!s.contains(x)) return 0.0;
  const int max_level = cfg.max_level < 0 ? s.depth() - 2 : std::min(cfg.max_level, s.depth());
  const int count = cfg.richardson ? std::max(cfg.samples, 1) : 1;
  const int degree = cfg.richardson ? std::max(cfg.degree, 1) : 1;
  CachedFn fn(f);
  const double fx = fn(x);
  const double sx = s.eval(x);

  Track both;
  Track left;
  Track right;
  auto gather = [&](const std::vector<double>& ys) {
    std::vector<Sample> out;
    for (double y : ys) {
      const double dt = s.eval(y) - sx;
      if (dt != 0.0) out.push_back({dt, fn(y) - fx});
    }
    return out;
  };
  // Round-off in f over the stencil width, or a margin well inside the tolerance.
  auto floor_of = [&](const std::vector<Sample>& pts, double tol) {
    double width = 0.0;
    double fmax = std::abs(fx);
    for (const auto& p : pts) {
      width = std::max(width, std::abs(p.dt));
      fmax = std::max(fmax, std::abs(fx + p.df));
    }
    return std::max(256 * std::numeric_limits<double>::epsilon() * fmax / width, tol);
  };
  for (int level = cfg.min_level; level <= max_level; ++level) {
    const auto st = s.stencil(x, level, count);
    const auto l = gather(st.left);
    const auto r = gather(st.right);
    if (l.size() + r.size() < 2 && !(cfg.richardson == false && !l.empty() + !r.empty() >= 1)) continue;
    const double scale = std::max(1.0, std::abs(both.best));
    if (l.size() >= 2) {
      left.push(fit_slope(l, std::min<int>(degree, static_cast<int>(l.size()))),
                floor_of(l, 1e-2 * cfg.side_tolerance * scale));
    }
    if (r.size() >= 2) {
      right.push(fit_slope(r, std::min<int>(degree, static_cast<int>(r.size()))),
                 floor_of(r, 1e-2 * cfg.side_tolerance * scale));
    }
    std::vector<Sample> all(l);
    all.insert(all.end(), r.begin(), r.end());
    const int sides = !l.empty() + !r.empty();
    both.push(fit_slope(all, std::max(1, std::min<int>(degree, static_cast<int>(all.size()) - sides + 1))),
              floor_of(all, 1e-4 * cfg.tolerance * scale));
    if (level >= cfg.min_level + 2 && both.done && (!left.active() || left.done) &&
        (!right.active() || right.done)) {
      break;
    }
  }
  if (!both.active()) throw NonDifferentiableError("f_alpha_derivative: no set points near x", fx, fx);

  if (cfg.richardson && left.active() && right.active()) {
    const double scale = std::max({1.0, std::abs(left.best), std::abs(right.best)});
    if (std::abs(left.best - right.best) > cfg.side_tolerance * scale + 2.0 * (left.error + right.error)) {
      throw NonDifferentiableError("f_alpha_derivative: one-sided limits disagree", left.best, right.best);
    }
  }
  if (!(both.error <= cfg.tolerance * std::max(1.0, std::abs(both.best)))) {
    throw NonDifferentiableError("f_alpha_derivative: quotient sequence did not settle", both.best,
                                 both.prev);
  }
  return both.best;
}

FractalFn derivative_fn(const FractalFn& f, DerivativeConfig cfg) {
  return FractalFn::raw([f, cfg](double x) { return f_alpha_derivative(f, x, cfg); }, f.staircase());
}

namespace {

struct Limits {
  double u0;
  double du;
  double sign;
};

Limits integration_limits(const FractalFn& f, double a, double b, std::size_t n) {
  if (n == 0) throw DomainError("f_alpha_integral: need at least one cell");
  const Staircase& s = f.staircase();
  const double sign = a <= b ? 1.0 : -1.0;
  if (a > b) std::swap(a, b);
  const double ua = s.eval(a);
  const double ub = s.eval(b);
  return {ua, (ub - ua) / static_cast<double>(n), sign};
}

double sample(const FractalFn& f, double u) {
  const double v = f(f.staircase().pseudoinverse(u));
  if (!std::isfinite(v)) throw IntegrandError("f_alpha_integral: integrand is not finite on the range");
  return v;
}

}  // namespace

double f_alpha_integral_value(const FractalFn& f, double a, double b, std::size_t n) {
  const auto [u0, du, sign] = integration_limits(f, a, b, n);
  if (du == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += sample(f, u0 + (static_cast<double>(i) + 0.5) * du);
  return sign * sum * du;
}

IntegralResult f_alpha_integral(const FractalFn& f, double a, double b, std::size_t n) {
  const auto [u0, du, sign] = integration_limits(f, a, b, n);
  if (du == 0.0) return {0.0, 0.0, 0.0};
  const double value = f_alpha_integral_value(f, a, b, n);

  // Cell-edge samples bound the integral from both sides when f is monotone along F.
  std::vector<double> edges(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    edges[i] = f(f.staircase().pseudoinverse(std::min(u0 + static_cast<double>(i) * du, u0 + n * du)));
    if (!std::isfinite(edges[i])) return {value, std::nullopt, std::nullopt};
  }
  const bool up = std::is_sorted(edges.begin(), edges.end());
  const bool down = std::is_sorted(edges.begin(), edges.end(), std::greater<>());
  if (!up && !down) return {value, std::nullopt, std::nullopt};
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lo += std::min(edges[i], edges[i + 1]);
    hi += std::max(edges[i], edges[i + 1]);
  }
  lo *= sign * du;
  hi *= sign * du;
  if (lo > hi) std::swap(lo, hi);
  return {value, lo, hi};
}

}  // namespace fractalcalc
