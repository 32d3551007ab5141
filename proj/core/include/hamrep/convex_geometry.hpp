#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "hamrep/point.hpp"

namespace hamrep::geometry {

/// Compact convex set in R^m (m <= 3) stored as its extreme points.
///
/// Vertices are canonical: counterclockwise from the lexicographically
/// smallest vertex for m = 2, sorted lexicographically for m = 1 and m = 3.
/// Segments and singletons are valid bodies in every dimension.
class ConvexBody {
 public:
  /// Empty placeholder with no vertices; not a valid argument to any
  /// geometric operation.
  ConvexBody() = default;
  /// Convex hull of a nonempty point cloud. Throws InputError on an empty
  /// cloud or mixed dimensions.
  static ConvexBody hull(std::span<const Point> points);
  static ConvexBody singleton(const Point& z);

  int dimension() const { return dim_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  friend bool operator==(const ConvexBody& a, const ConvexBody& b) = default;

 private:
  ConvexBody(int dim, std::vector<Point> vertices) : dim_(dim), vertices_(std::move(vertices)) {}

  int dim_ = 0;
  std::vector<Point> vertices_;
};

/// Unit vectors p_j with weights w_j >= 0, sum w_j = 1, approximating the
/// normalized surface measure of S^{m-1}.
class SphereQuadrature {
 public:
  static constexpr int kDefaultCircleNodes = 512;
  static constexpr int kDefaultSphereNodes = 590;

  /// m = 1: nodes {-1, +1}. m = 2: trapezoid rule on `count` equally spaced
  /// angles. m = 3: Gauss-Legendre in z times trapezoid in azimuth, with about
  /// `count` nodes in total.
  static SphereQuadrature uniform(int m, int count);
  static SphereQuadrature default_for(int m);
  /// Validates unit length (1e-12) and normalizes the weights.
  static SphereQuadrature from_nodes(std::vector<Point> nodes, std::vector<double> weights);

  int dimension() const { return dim_; }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  /// True for the m = 2 trapezoid rule, whose nodes are in angular order.
  bool is_circle_rule() const { return circle_rule_; }

 private:
  int dim_ = 0;
  bool circle_rule_ = false;
  std::vector<Point> nodes_;
  std::vector<double> weights_;
};

struct Projection {
  Point point;
  double distance = 0.0;
};

struct POperatorOptions {
  /// Samples on the bounding circle (m = 2) or sphere (m = 3) used to
  /// approximate the curved part of K intersected with the ball.
  int boundary_samples = 256;
};

double support(const ConvexBody& K, const Point& p);
/// Maximizing vertex; ties go to the lexicographically smallest vertex.
const Point& support_vertex(const ConvexBody& K, const Point& p);

Point steiner_point(const ConvexBody& K, const SphereQuadrature& Q);
/// Exact Steiner point for m <= 2: vertices weighted by their exterior
/// angles over 2 pi (the midpoint for a segment). Throws InputError for m = 3.
Point steiner_point_exact(const ConvexBody& K);

double hausdorff(const ConvexBody& K, const ConvexBody& D);
/// sup over x in K of d(x, D).
double directed_hausdorff(const ConvexBody& K, const ConvexBody& D);

Projection project(const Point& y, const ConvexBody& K);
bool contains(const ConvexBody& K, const Point& y, double tol = 1e-12);

/// Polytope approximation of K intersected with B(y, 2 d(y,K)). The result is
/// a subset of K that contains the projection of y; {y} when y is in K.
ConvexBody ball_intersect_P(const Point& y, const ConvexBody& K, const POperatorOptions& opt = {});

/// Minimum-norm point of the hull of `points` (Wolfe's algorithm).
Point min_norm_point(std::span<const Point> points);

/// CSV with one `x1,...,xm` row per point; optional header line.
std::vector<Point> read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::filesystem::path& path, std::span<const Point> points);
ConvexBody read_body_csv(const std::filesystem::path& path);
void write_body_csv(const std::filesystem::path& path, const ConvexBody& K);
/// Rows `x1,...,xm,w`; weights are rescaled to sum to 1 on load.
SphereQuadrature read_quadrature_csv(const std::filesystem::path& path);
void write_quadrature_csv(const std::filesystem::path& path, const SphereQuadrature& Q);

}  // namespace hamrep::geometry
