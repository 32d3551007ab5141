#pragma once

#include <filesystem>
#include <vector>

#include "hamrep/ext_real.hpp"
#include "hamrep/point.hpp"

namespace hamrep::conjugate {

/// Uniform axis lo, lo + step, ..., lo + (count - 1) step.
struct Axis {
  double lo = 0.0;
  double step = 1.0;
  int count = 1;

  /// count >= 2 nodes spanning [lo, hi].
  static Axis spanning(double lo, double hi, int count);
  /// Nodes lo + i*step for i = 0..count-1, with count chosen so the last
  /// node is the first one at or beyond hi.
  static Axis with_step(double lo, double hi, double step);

  double node(int i) const { return lo + i * step; }
  double hi() const { return node(count - 1); }
};

/// Tensor grid of one or two uniform axes; flat index is row-major with the
/// last axis fastest.
class Grid {
 public:
  Grid() = default;
  explicit Grid(Axis a);
  Grid(Axis a, Axis b);

  int dimension() const { return static_cast<int>(axes_.size()); }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const;
  Point node(std::size_t flat) const;

 private:
  std::vector<Axis> axes_;
};

/// Extended-real values on a grid; validate() enforces properness.
struct GridFunction {
  Grid grid;
  std::vector<ExtReal> values;

  /// Samples f at every node.
  template <class F>
  static GridFunction sample(const Grid& g, F&& f) {
    GridFunction out{g, {}};
    out.values.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.values.push_back(ExtReal(f(g.node(i))));
    return out;
  }

  /// Throws InputError on a size mismatch and PropernessError when every
  /// value is +inf.
  void validate() const;
};

/// Dual axis covering the slope window [-1.2 bound, 1.2 bound] at spacing h.
Axis padded_slope_axis(double bound, double h);

/// g*(p) = max over finite nodes v of <p,v> - g(v), at every node p of `dual`.
GridFunction conjugate_grid(const GridFunction& g, const Grid& dual);

/// Discrete inf-convolution on the Minkowski-sum grid. Both inputs must share
/// the spacing on every axis, so node differences are exact index offsets.
GridFunction episum(const GridFunction& phi, const GridFunction& psi);

/// Closed form of the conjugate of p -> k (1 + |p|) delta:
/// -k delta on |v| <= k delta and +inf elsewhere.
struct ConeConjugate {
  double radius = 0.0;
  double level = 0.0;

  ExtReal operator()(double v) const;
  ExtReal operator()(const Point& v) const;
};

ConeConjugate conjugate_of_cone_term(double k, double delta);

struct BiconjugateReport {
  /// max over nodes of |g** - conv g| within the hull of the finite nodes.
  double max_deviation = 0.0;
  int worst_node = -1;
  std::vector<double> biconjugate;
  std::vector<double> envelope;
};

/// Computes g** by a grid conjugate followed by a grid biconjugate with a
/// local golden-section refinement of each maximizing slope, and compares it
/// with the lower convex envelope of the finite samples. 1-D grids only.
BiconjugateReport biconjugate_check(const GridFunction& g);

/// Rows `v,value` (or `v1,v2,value`) with literal `inf`; header optional.
GridFunction read_grid_function_csv(const std::filesystem::path& path);
void write_grid_function_csv(const std::filesystem::path& path, const GridFunction& g);

}  // namespace hamrep::conjugate
