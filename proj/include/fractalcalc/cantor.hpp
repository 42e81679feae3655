#pragma once

#include <span>
#include <string>
#include <vector>

namespace fractalcalc {

/// A symmetric self-similar Cantor-like subset of [a, b].
///
/// Level 1 keeps m closed sub-intervals of length r*(b-a), the first starting at a and the last
/// ending at b, separated by equal gaps. Each retained piece is replaced by a scaled copy of the
/// whole, recursively. The degenerate spec m = 1, r = 1 denotes the full interval [a, b]
/// (alpha = 1) and is used as a classical-calculus fixture.
struct CantorSpec {
  double a = 0.0;
  double b = 1.0;
  int m = 2;
  double r = 1.0 / 3.0;
  int depth_max = 40;

  /// Throws DomainError when any invariant is violated.
  void validate() const;

  /// Similarity dimension ln(m) / ln(1/r); 1 for the full interval.
  double alpha() const;

  double length() const { return b - a; }
  bool is_full_interval() const { return m == 1; }

  /// Middle-third set on [0, 1].
  static CantorSpec triadic();
  static CantorSpec full_interval(double a = 0.0, double b = 1.0);

  /// Parses `cantor:m=<int>,r=<real>[,a=<real>,b=<real>,depth=<int>]`.
  static CantorSpec parse(const std::string& text);

  bool operator==(const CantorSpec&) const = default;
};

/// Branching data in unit coordinates. The full interval is modelled as the gap-free
/// two-copy split so that it has a proper refinement sequence.
struct CellGeometry {
  int branches;
  double ratio;  // length of a child relative to its parent
  double step;   // offset between consecutive children (ratio + gap)
};

CellGeometry geometry(const CantorSpec& spec);

/// Ordered subdivision t_0 < t_1 < ... < t_n of an interval.
class Partition {
 public:
  explicit Partition(std::vector<double> points);

  std::span<const double> points() const { return points_; }
  double mesh() const { return mesh_; }
  std::size_t cells() const { return points_.size() - 1; }

  /// Uniform subdivision of [lo, hi] into n cells.
  static Partition uniform(double lo, double hi, std::size_t n);

 private:
  std::vector<double> points_;
  double mesh_;
};

/// Result of walking the construction tree down to a point.
struct Descent {
  double cantor;  // normalized staircase value in [0, 1]
  bool in_set;    // false if the point falls in a removed gap at some resolved level
};

/// Locates x in the construction tree, snapping to cell endpoints within accumulated rounding.
Descent descend(const CantorSpec& spec, double x, int depth);

/// Membership in F to the given depth resolution.
bool contains(const CantorSpec& spec, double x, int depth);

/// Flag function: 1 iff the depth-level approximation of F meets [lo, hi].
int flag(const CantorSpec& spec, double lo, double hi, int depth);

/// Gamma(alpha + 1) * sum over cells of (dt)^alpha * flag, for an explicit partition.
double coarse_sum(const CantorSpec& spec, const Partition& partition, double alpha, int depth);

/// Coarse-grained mass estimated over gap-aligned partitions with mesh <= delta.
///
/// The partition family is the level-n construction cells (n the coarsest level whose cells
/// fit under delta) with gaps subdivided freely. This is an upper bound on the true infimum;
/// for the self-similar family it is attained. Throws ResolutionError when n > depth_max.
double coarse_mass(const CantorSpec& spec, double a, double b, double alpha, double delta);

struct MassEstimate {
  double value;
  bool converged;
  int levels;
};

/// Limit of coarse_mass along delta_k = (b - a) r^k, with Aitken acceleration once the
/// iterates decay geometrically. Stops when successive estimates differ by less than tol.
MassEstimate mass(const CantorSpec& spec, double a, double b, double alpha, double tol);

/// Crossover alpha where the mass switches from divergent to vanishing, by bisection on the
/// geometric trend of coarse_mass. Absolute accuracy well under 1e-3.
double gamma_dimension(const CantorSpec& spec, double a, double b);

}  // namespace fractalcalc
