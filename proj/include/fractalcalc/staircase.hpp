#pragma once

#include <optional>
#include <vector>

#include "fractalcalc/cantor.hpp"

namespace fractalcalc {

struct StaircaseOptions {
  std::optional<double> alpha;          // defaults to spec.alpha()
  std::optional<double> a0;             // anchor, defaults to spec.a
  std::optional<double> normalization;  // S(b) - S(a), defaults to Gamma(alpha+1) (b-a)^alpha
  std::optional<int> depth;             // defaults to spec.depth_max
};

/// Integral staircase S(x) of a CantorSpec: the cumulative mass from the anchor a0, negative
/// to the left of it. Evaluated by descending the construction tree, so it is exact at
/// construction points and flat on every removed gap.
class Staircase {
 public:
  explicit Staircase(CantorSpec spec, StaircaseOptions options = {});

  /// Gamma(alpha + 1) (b - a)^alpha.
  static double default_normalization(const CantorSpec& spec, double alpha);

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;

  /// Smallest x in F (to depth resolution) with S(x) >= u. Requires S(a) <= u <= S(b).
  double pseudoinverse(double u) const;

  /// Normalized staircase value in [0, 1], independent of anchor and normalization.
  double cantor(double x) const;

  bool contains(double x) const;

  const CantorSpec& spec() const { return spec_; }
  double alpha() const { return alpha_; }
  double a0() const { return a0_; }
  double normalization() const { return normalization_; }
  int depth() const { return depth_; }
  double lower() const { return -normalization_ * anchor_cantor_; }
  double upper() const { return normalization_ * (1.0 - anchor_cantor_); }
  /// Width of the finest resolved construction cell.
  double resolution() const;

  /// Nearest level-k construction points on either side of x whose staircase value differs
  /// from S(x). A side is empty when no such point exists at that level (x at a gap edge,
  /// or at an end of [a, b]).
  struct Neighbors {
    std::optional<double> left;
    std::optional<double> right;
  };
  Neighbors neighbors(double x, int level) const;

  /// Up to `count` level-k construction points on each side of x, nearest first, with
  /// distinct staircase values. Their staircase values are spaced evenly, by
  /// normalization / m^k. neighbors() is the first entry of each side.
  struct Stencil {
    std::vector<double> left;
    std::vector<double> right;
  };
  Stencil stencil(double x, int level, int count) const;

  /// Sorted endpoints of all level-k construction cells.
  std::vector<double> construction_points(int level) const;

  /// Midpoints of every removed gap created at levels 1..level.
  std::vector<double> gap_midpoints(int level) const;

  /// Left end of level-k cell number `index` (cells counted left to right).
  double cell_start(int level, unsigned long long index) const;
  double cell_width(int level) const;

 private:
  CantorSpec spec_;
  CellGeometry geo_;
  double alpha_;
  double a0_;
  double normalization_;
  int depth_;
  double anchor_cantor_;
};

}  // namespace fractalcalc
