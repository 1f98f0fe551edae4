#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lgp/boundary_data.hpp"
#include "lgp/geometry.hpp"

namespace lgp {

enum class LineKind { GammaChord, UpsilonPair, SingleToUpsilon, Chord };

std::string to_string(LineKind kind);

/// Superlevel boundary at one level. `extent` distinguishes a proper cut
/// from the trivial sets Omega (all points) and the null set.
struct LevelLine {
  enum class Extent { Segments, Everything, Nothing };

  double t = 0.0;
  LineKind kind = LineKind::Chord;
  Extent extent = Extent::Segments;
  /// Level segments, each oriented with the superlevel set on its left.
  std::vector<Segment> segments;
  /// {u >= t} = Omega intersected with these closed half planes.
  std::vector<HalfPlane> closed;
  /// Closure of the union of {u >= s} over s > t, when it differs from the
  /// closed superlevel set (levels carrying a fat region).
  std::optional<std::vector<HalfPlane>> upper;
  std::vector<Segment> upper_segments;
  /// Local datum-arc parameters of segment ends that carry the value t.
  std::vector<double> gamma_params;
  /// Segment ends in the open free arc: segment index and boundary parameter.
  std::vector<std::pair<int, double>> upsilon_feet;

  bool contains(Point p, double tol) const;
  /// Signed distance into the closed superlevel set (infinite for Everything).
  double depth(Point p, bool use_upper) const;
  double total_length() const;
};

struct FatRegion {
  double value = 0.0;
  ConvexRegion region;
  double area = 0.0;
  std::string label;
};

struct SolveOptions {
  int t_samples = 2001;
  int classify_samples = 1024;
};

class LevelFamily {
 public:
  using Builder = std::function<LevelLine(double)>;

  int case_id = 0;  // 1, 2, 3 for the partial boundary theorem; 0 otherwise
  std::string solver;
  ConvexBoundary domain = ConvexBoundary::circle(1.0);
  std::optional<BoundaryArc> gamma;
  std::optional<BoundaryFunction> datum;
  double inf = 0.0;
  double sup = 0.0;
  std::vector<double> t_grid;
  std::vector<LevelLine> lines;
  std::optional<double> tau;
  std::vector<double> critical;
  std::vector<FatRegion> fat;
  std::vector<double> T_upsilon;
  std::vector<double> T_gamma;
  std::optional<DistanceClassification> classification;
  Builder builder;

  /// Level line at an arbitrary level, computed on demand.
  LevelLine line_at(double t) const { return builder(t); }
};

/// Uniform grid of n points on [lo, hi] merged with the critical values.
std::vector<double> make_t_grid(double lo, double hi, int n, const std::vector<double>& critical);

/// Fills lines and T sets from the builder over the grid.
void build_lines(LevelFamily& family);

/// Case 1: f(a) = f(b) = inf f, unique strict maximum, every other value
/// attained twice.
LevelFamily solve_case1(const BoundaryFunction& f, const SolveOptions& opt = {});
/// Case 2: f strictly monotone on the datum arc.
LevelFamily solve_case2(const BoundaryFunction& f, const SolveOptions& opt = {});
/// Case 3: f(a) = f(b), one interior minimum and maximum, and an interior
/// point x0 at level f(a) equidistant from the free arc, a and b.
LevelFamily solve_case3(const BoundaryFunction& f, const SolveOptions& opt = {});
/// Data whose superlevel sets on the boundary are single arcs (rectangle
/// data, continuous approximations of jump data): chords joining the ends of
/// {f >= t}.
LevelFamily solve_chord_family(const BoundaryFunction& f, const SolveOptions& opt = {});
/// Three-valued jump datum on the whole boundary: 0 on [s0, s1), a1 + a2 on
/// [s1, s2), a1 on [s2, s0 + P).
LevelFamily solve_piecewise_constant(const ConvexBoundary& domain, double s0, double s1, double s2, double a1,
                                     double a2, const SolveOptions& opt = {});

/// h(t) = d(x^t, Y) + d(y^t, Y) - d(x^t, y^t) for case 1 data.
double case1_h(const BoundaryFunction& f, double t);

/// u(p) = max{t : p in A_t}, fat regions first; between grid levels the value
/// is interpolated by the distances to the neighbouring level lines.
double evaluate(const LevelFamily& family, Point p);

/// Level lines at the two Gauss nodes of every grid slab, with weights.
struct WeightedLine {
  double weight = 0.0;
  LevelLine line;
};

std::vector<WeightedLine> slab_lines(const LevelFamily& family);

struct CoareaResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Integral over t of the total level-line length (two-point Gauss per slab,
/// Richardson estimate from the slab-merged rule).
CoareaResult coarea_tv(const LevelFamily& family);

struct UniquenessProbe {
  double max_distance = 0.0;
  double worst_t = 0.0;
  int compared = 0;
  int extent_mismatches = 0;
  std::vector<double> per_level;
};

/// Hausdorff distance between level boundaries of two families at the levels
/// of the first family's grid.
UniquenessProbe uniqueness_probe(const LevelFamily& a, const LevelFamily& b);

struct InvariantResult {
  bool ok = true;
  double worst = 0.0;
  long violations = 0;
  long checked = 0;
};

/// Every vertex of the t-superlevel region lies in the s-superlevel region
/// for grid levels s < t.
InvariantResult check_nesting(const LevelFamily& family, int stride = 1);
/// No two level segments of distinct levels cross in the open domain.
InvariantResult check_disjoint(const LevelFamily& family, int stride = 1);
/// Every datum-arc endpoint of a level segment carries the value t.
InvariantResult check_boundary_contact(const LevelFamily& family, const BoundaryFunction& f);
/// Angle defect from 90 degrees at segment ends in the open free arc.
InvariantResult check_orthogonality(const LevelFamily& family);

}  // namespace lgp
