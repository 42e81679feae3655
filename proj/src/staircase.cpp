#include "fractalcalc/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

namespace {

// Largest level whose cell count is still an exact integer in a double.
int max_index_level(int branches) {
  return static_cast<int>(std::floor(53.0 / std::log2(static_cast<double>(branches))));
}

}  // namespace

Staircase::Staircase(CantorSpec spec, StaircaseOptions options)
    : spec_(spec), geo_(geometry(spec)) {
  spec_.validate();
  alpha_ = options.alpha.value_or(spec_.alpha());
  if (!(alpha_ > 0.0) || alpha_ > 1.0) throw DomainError("Staircase: alpha must lie in (0, 1]");
  a0_ = options.a0.value_or(spec_.a);
  if (a0_ < spec_.a || a0_ > spec_.b) throw DomainError("Staircase: anchor a0 must lie in [a, b]");
  normalization_ = options.normalization.value_or(default_normalization(spec_, alpha_));
  if (!(normalization_ > 0.0) || !std::isfinite(normalization_)) {
    throw DomainError("Staircase: normalization must be positive");
  }
  depth_ = options.depth.value_or(spec_.depth_max);
  if (depth_ < 1 || depth_ > spec_.depth_max) throw DomainError("Staircase: depth outside [1, depth_max]");
  anchor_cantor_ = descend(spec_, a0_, depth_).cantor;
}

double Staircase::default_normalization(const CantorSpec& spec, double alpha) {
  return std::tgamma(alpha + 1.0) * std::pow(spec.length(), alpha);
}

double Staircase::cantor(double x) const {
  if (!(x >= spec_.a) || !(x <= spec_.b)) throw DomainError("Staircase: x outside [a, b]");
  return descend(spec_, x, depth_).cantor;
}

double Staircase::eval(double x) const { return normalization_ * (cantor(x) - anchor_cantor_); }

bool Staircase::contains(double x) const { return fractalcalc::contains(spec_, x, depth_); }

double Staircase::resolution() const { return cell_width(depth_); }

double Staircase::pseudoinverse(double u) const {
  const double slack = 1e-12 * normalization_;
  if (!(u >= lower() - slack) || !(u <= upper() + slack)) {
    throw DomainError("pseudoinverse: u outside [S(a), S(b)]");
  }
  double c = std::clamp(anchor_cantor_ + u / normalization_, 0.0, 1.0);
  double pos = 0.0;
  double size = 1.0;
  // A value meant to be i / m^k can come out a few ulps high, which would jump the gap after
  // cell i. The error scales by m per level, and so does the snapping window.
  double tol = 64 * std::numeric_limits<double>::epsilon();
  for (int level = 0; level < depth_ && c > 0.0; ++level) {
    // ceil - 1 picks the left-most cell whose range reaches c, hence the smallest x.
    double v = c * geo_.branches;
    tol *= geo_.branches;
    const double nearest = std::round(v);
    if (tol < 1e-6 && std::abs(v - nearest) <= tol) v = nearest;
    const int j = std::clamp(static_cast<int>(std::ceil(v)) - 1, 0, geo_.branches - 1);
    c = std::clamp(v - j, 0.0, 1.0);
    pos += j * geo_.step * size;
    size *= geo_.ratio;
  }
  pos += c * size;
  return std::min(spec_.a + spec_.length() * pos, spec_.b);
}

double Staircase::cell_width(int level) const {
  return spec_.length() * std::pow(geo_.ratio, level);
}

double Staircase::cell_start(int level, unsigned long long index) const {
  double pos = 0.0;
  for (int l = level; l >= 1; --l) {
    const auto digit = index % static_cast<unsigned long long>(geo_.branches);
    index /= static_cast<unsigned long long>(geo_.branches);
    pos += static_cast<double>(digit) * geo_.step * std::pow(geo_.ratio, l - 1);
  }
  return spec_.a + spec_.length() * pos;
}

Staircase::Stencil Staircase::stencil(double x, int level, int count) const {
  Stencil out;
  if (level < 0 || level > std::min(depth_, max_index_level(geo_.branches) - 1)) return out;
  const double cells = std::pow(static_cast<double>(geo_.branches), level);
  double v = cantor(x) * cells;
  const double nearest = std::round(v);
  if (std::abs(v - nearest) <= 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, v)) v = nearest;
  // Cantor values i / m^k. Left of x take the start of cell i, right of x the end of cell i - 1:
  // of the two points sharing that value, the one nearer x.
  for (double i = std::ceil(v) - 1.0; i >= 0.0 && static_cast<int>(out.left.size()) < count; i -= 1.0) {
    out.left.push_back(cell_start(level, static_cast<unsigned long long>(i)));
  }
  for (double i = std::floor(v) + 1.0; i <= cells && static_cast<int>(out.right.size()) < count; i += 1.0) {
    out.right.push_back(
        std::min(cell_start(level, static_cast<unsigned long long>(i - 1.0)) + cell_width(level), spec_.b));
  }
  return out;
}

Staircase::Neighbors Staircase::neighbors(double x, int level) const {
  const Stencil st = stencil(x, level, 1);
  Neighbors out;
  if (!st.left.empty()) out.left = st.left.front();
  if (!st.right.empty()) out.right = st.right.front();
  return out;
}

std::vector<double> Staircase::construction_points(int level) const {
  if (level < 0 || level > 24) throw DomainError("construction_points: level outside [0, 24]");
  const auto count = static_cast<unsigned long long>(std::llround(std::pow(geo_.branches, level)));
  const double width = cell_width(level);
  std::vector<double> pts;
  pts.reserve(2 * count);
  for (unsigned long long i = 0; i < count; ++i) {
    const double lo = cell_start(level, i);
    pts.push_back(lo);
    pts.push_back(std::min(lo + width, spec_.b));
  }
  std::sort(pts.begin(), pts.end());
  const double tol = 1e-14 * spec_.length();
  pts.erase(std::unique(pts.begin(), pts.end(), [tol](double p, double q) { return q - p <= tol; }),
            pts.end());
  return pts;
}

std::vector<double> Staircase::gap_midpoints(int level) const {
  std::vector<double> mids;
  const double gap = geo_.step - geo_.ratio;
  if (gap <= 0.0) return mids;
  for (int lvl = 0; lvl < level; ++lvl) {
    const auto count = static_cast<unsigned long long>(std::llround(std::pow(geo_.branches, lvl)));
    const double width = cell_width(lvl);
    for (unsigned long long i = 0; i < count; ++i) {
      const double lo = cell_start(lvl, i);
      for (int j = 0; j + 1 < geo_.branches; ++j) {
        mids.push_back(lo + width * (j * geo_.step + geo_.ratio + 0.5 * gap));
      }
    }
  }
  std::sort(mids.begin(), mids.end());
  return mids;
}

}  // namespace fractalcalc
