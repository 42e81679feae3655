#include "fractalcalc/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Slack for comparing accumulated cell positions in unit coordinates.
constexpr double kPositionSlack = 64 * kEps;

double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
    throw DomainError("set spec: invalid value for '" + key + "': '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || v < -1000000 || v > 1000000) {
    throw DomainError("set spec: invalid integer for '" + key + "': '" + value + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

void CantorSpec::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw DomainError("CantorSpec: need finite a < b");
  }
  if (depth_max < 1) throw DomainError("CantorSpec: depth_max must be positive");
  if (m == 1) {
    if (r != 1.0) throw DomainError("CantorSpec: m = 1 is only allowed with r = 1 (full interval)");
    return;
  }
  if (m < 2) throw DomainError("CantorSpec: m must be >= 2 (or m = 1, r = 1)");
  if (!(r > 0.0) || !(r < 1.0)) throw DomainError("CantorSpec: r must lie in (0, 1)");
  if (m * r > 1.0 + 1e-12) throw DomainError("CantorSpec: m * r must not exceed 1");
}

double CantorSpec::alpha() const {
  if (m == 1) return 1.0;
  return std::log(static_cast<double>(m)) / std::log(1.0 / r);
}

CantorSpec CantorSpec::triadic() { return CantorSpec{}; }

CantorSpec CantorSpec::full_interval(double a, double b) {
  return CantorSpec{.a = a, .b = b, .m = 1, .r = 1.0, .depth_max = 50};
}

CantorSpec CantorSpec::parse(const std::string& text) {
  const std::string prefix = "cantor:";
  if (text.rfind(prefix, 0) != 0) {
    throw DomainError("set spec must start with 'cantor:', got '" + text + "'");
  }
  CantorSpec spec;
  bool have_m = false;
  bool have_r = false;
  std::stringstream fields(text.substr(prefix.size()));
  std::string field;
  while (std::getline(fields, field, ',')) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw DomainError("set spec: expected key=value, got '" + field + "'");
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "m") {
      spec.m = parse_int(key, value);
      have_m = true;
    } else if (key == "r") {
      spec.r = parse_real(key, value);
      have_r = true;
    } else if (key == "a") {
      spec.a = parse_real(key, value);
    } else if (key == "b") {
      spec.b = parse_real(key, value);
    } else if (key == "depth") {
      spec.depth_max = parse_int(key, value);
    } else {
      throw DomainError("set spec: unknown key '" + key + "'");
    }
  }
  if (!have_m || !have_r) throw DomainError("set spec: both m and r are required");
  if (spec.m == 1) spec.depth_max = std::max(spec.depth_max, 50);
  spec.validate();
  return spec;
}

CellGeometry geometry(const CantorSpec& spec) {
  if (spec.is_full_interval()) return {2, 0.5, 0.5};
  const double gap = (1.0 - spec.m * spec.r) / (spec.m - 1);
  return {spec.m, spec.r, spec.r + std::max(gap, 0.0)};
}

Partition::Partition(std::vector<double> points) : points_(std::move(points)), mesh_(0.0) {
  if (points_.size() < 2) throw DomainError("Partition: need at least two points");
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const double gap = points_[i + 1] - points_[i];
    if (!(gap > 0.0)) throw DomainError("Partition: points must be strictly increasing");
    mesh_ = std::max(mesh_, gap);
  }
}

Partition Partition::uniform(double lo, double hi, std::size_t n) {
  if (n == 0 || !(hi > lo)) throw DomainError("Partition::uniform: need n > 0 and lo < hi");
  std::vector<double> pts(n + 1);
  for (std::size_t i = 0; i <= n; ++i) pts[i] = lo + (hi - lo) * static_cast<double>(i) / n;
  pts.back() = hi;
  return Partition(std::move(pts));
}

Descent descend(const CantorSpec& spec, double x, int depth) {
  const CellGeometry geo = geometry(spec);
  double u = (x - spec.a) / spec.length();
  // Rounding in u grows by 1/ratio per level; snap to cell ends inside that band.
  double tol = 16 * kEps;
  if (u <= tol) return {0.0, u >= -tol};
  if (u >= 1.0 - tol) return {1.0, u <= 1.0 + tol};

  const double inv_m = 1.0 / geo.branches;
  double cantor = 0.0;
  double weight = 1.0;
  for (int level = 0; level < depth && tol < 0.25; ++level) {
    if (u <= tol) return {cantor, true};
    if (u >= 1.0 - tol) return {cantor + weight, true};
    const int j = std::min(static_cast<int>(u / geo.step), geo.branches - 1);
    const double offset = u - j * geo.step;
    if (offset <= geo.ratio + tol) {
      u = std::clamp(offset / geo.ratio, 0.0, 1.0);
      cantor += weight * j * inv_m;
      weight *= inv_m;
      tol /= geo.ratio;
      continue;
    }
    // Gap after copy j; the staircase is flat there.
    const double next_start = (j + 1) * geo.step;
    return {cantor + weight * (j + 1) * inv_m, next_start - u <= tol};
  }
  return {cantor + weight * u, true};
}

bool contains(const CantorSpec& spec, double x, int depth) {
  if (x < spec.a || x > spec.b) return false;
  return descend(spec, x, depth).in_set;
}

namespace {

bool meets(const CellGeometry& geo, double lo, double size, int level, int depth, double qlo,
           double qhi) {
  const double hi = lo + size;
  if (hi < qlo - kPositionSlack || lo > qhi + kPositionSlack) return false;
  if (level == depth) return true;
  if (lo >= qlo - kPositionSlack && hi <= qhi + kPositionSlack) return true;
  for (int j = 0; j < geo.branches; ++j) {
    if (meets(geo, lo + j * geo.step * size, size * geo.ratio, level + 1, depth, qlo, qhi)) {
      return true;
    }
  }
  return false;
}

}  // namespace

int flag(const CantorSpec& spec, double lo, double hi, int depth) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("flag: interval endpoints must be finite");
  if (lo > hi) throw DomainError("flag: malformed interval (lo > hi)");
  if (depth < 0 || depth > spec.depth_max) throw DomainError("flag: depth outside [0, depth_max]");
  const double L = spec.length();
  return meets(geometry(spec), 0.0, 1.0, 0, depth, (lo - spec.a) / L, (hi - spec.a) / L) ? 1 : 0;
}

double coarse_sum(const CantorSpec& spec, const Partition& partition, double alpha, int depth) {
  const auto pts = partition.points();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (flag(spec, pts[i], pts[i + 1], depth)) sum += std::pow(pts[i + 1] - pts[i], alpha);
  }
  return std::tgamma(alpha + 1.0) * sum;
}

namespace {

struct MassWalk {
  const CantorSpec& spec;
  CellGeometry geo;
  int target_level;
  double alpha;
  double ua;
  double ub;

  // Sum of (cell length)^alpha in unit coordinates over level-target cells meeting [ua, ub].
  double operator()(double lo, double size, int level) const {
    const double hi = lo + size;
    if (hi < ua - kPositionSlack || lo > ub + kPositionSlack) return 0.0;
    if (lo >= ua - kPositionSlack && hi <= ub + kPositionSlack) {
      const int remaining = target_level - level;
      return std::exp(remaining * std::log(static_cast<double>(geo.branches)) +
                      alpha * (std::log(size) + remaining * std::log(geo.ratio)));
    }
    if (level == target_level) {
      const double plo = std::max(lo, ua);
      const double phi = std::min(hi, ub);
      if (!(phi > plo + kPositionSlack)) return 0.0;  // touching at a point: rounding, not overlap
      const double L = spec.length();
      if (!flag(spec, spec.a + plo * L, spec.a + phi * L, spec.depth_max)) return 0.0;
      return std::pow(phi - plo, alpha);
    }
    double sum = 0.0;
    for (int j = 0; j < geo.branches; ++j) {
      sum += (*this)(lo + j * geo.step * size, size * geo.ratio, level + 1);
    }
    return sum;
  }
};

void check_mass_args(const CantorSpec& spec, double a, double b, double alpha) {
  spec.validate();
  if (!(a < b)) throw DomainError("mass: need a < b");
  if (!(alpha > 0.0) || alpha > 1.0) throw DomainError("mass: alpha must lie in (0, 1]");
}

}  // namespace

double coarse_mass(const CantorSpec& spec, double a, double b, double alpha, double delta) {
  check_mass_args(spec, a, b, alpha);
  if (!(delta > 0.0)) throw DomainError("coarse_mass: delta must be positive");
  const CellGeometry geo = geometry(spec);
  const double L = spec.length();
  int level = 0;
  double cell = L;
  while (cell > delta * (1.0 + 1e-12)) {
    cell *= geo.ratio;
    if (++level > spec.depth_max) {
      throw ResolutionError("coarse_mass: delta below the resolution of depth_max");
    }
  }
  const double ua = std::clamp((a - spec.a) / L, 0.0, 1.0);
  const double ub = std::clamp((b - spec.a) / L, 0.0, 1.0);
  const MassWalk walk{spec, geo, level, alpha, ua, ub};
  return std::tgamma(alpha + 1.0) * std::pow(L, alpha) * walk(0.0, 1.0, 0);
}

MassEstimate mass(const CantorSpec& spec, double a, double b, double alpha, double tol) {
  check_mass_args(spec, a, b, alpha);
  if (!(tol > 0.0)) throw DomainError("mass: tol must be positive");
  const CellGeometry geo = geometry(spec);
  std::vector<double> raw;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double delta = spec.length();
  for (int k = 1; k <= spec.depth_max; ++k) {
    delta *= geo.ratio;
    raw.push_back(coarse_mass(spec, a, b, alpha, delta));
    double estimate = raw.back();
    if (raw.size() >= 3) {
      const double d1 = raw[raw.size() - 2] - raw[raw.size() - 3];
      const double d2 = raw.back() - raw[raw.size() - 2];
      const double scale = std::max(1.0, std::abs(raw.back()));
      if (std::abs(d1) > 1e-14 * scale) {
        const double q = d2 / d1;
        // Aitken only for a geometrically decaying tail.
        if (q >= 0.0 && q < 0.999) estimate = raw.back() - d2 * d2 / (d2 - d1);
      }
    }
    if (k >= 2 && std::abs(estimate - previous) < tol) return {estimate, true, k};
    previous = estimate;
  }
  return {previous, false, spec.depth_max};
}

double gamma_dimension(const CantorSpec& spec, double a, double b) {
  spec.validate();
  if (!(a < b) || a < spec.a || b > spec.b) {
    throw DomainError("gamma_dimension: need spec.a <= a < b <= spec.b");
  }
  const CellGeometry geo = geometry(spec);
  const int hi_level = std::min(spec.depth_max, 30);
  const int lo_level = hi_level / 2;
  const double d_lo = spec.length() * std::pow(geo.ratio, lo_level);
  const double d_hi = spec.length() * std::pow(geo.ratio, hi_level);

  // +1: mass diverges, -1: mass vanishes, 0: finite and nonzero.
  auto trend = [&](double alpha) {
    const double v1 = coarse_mass(spec, a, b, alpha, d_lo);
    const double v2 = coarse_mass(spec, a, b, alpha, d_hi);
    if (!(v1 > 0.0) || !(v2 > 0.0) || !std::isfinite(v1) || !std::isfinite(v2)) {
      throw EstimationError("gamma_dimension: mass trend undefined (interval misses the set?)", 0.0, 1.0);
    }
    const double rate = std::log(v2 / v1) / (hi_level - lo_level);
    if (std::abs(rate) < 1e-12) return 0;
    return rate > 0.0 ? 1 : -1;
  };

  const int at_one = trend(1.0);
  if (at_one == 0) return 1.0;
  if (at_one > 0) throw EstimationError("gamma_dimension: mass still diverges at alpha = 1", 1.0, 1.0);
  double lo = 1e-6;
  double hi = 1.0;
  if (trend(lo) < 0) throw EstimationError("gamma_dimension: mass vanishes at the smallest alpha", 0.0, lo);
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    const int t = trend(mid);
    if (t == 0) return mid;
    (t > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fractalcalc
