#pragma once

#include <filesystem>
#include <vector>

#include "hamrep/convex_geometry.hpp"
#include "hamrep/models.hpp"

namespace hamrep::epigraph {

struct SectionOptions {
  /// Nodes of the dom grid. Nodes follow v = mid + half sin(pi s / 2) for
  /// uniform s in [-1,1], which is uniform in arc length on circular graphs.
  int dom_nodes = 257;
  bool clustered = true;
  /// EX4-style open domains with unbounded L may be converted to a body only
  /// when the caller accepts that the cap cuts the graph.
  bool acknowledge_cap = false;
};

/// Dom grid nodes: the endpoints (inner endpoints for open domains) and
/// opt.dom_nodes nodes in between, or the single point of a singleton domain.
std::vector<double> dom_nodes(const models::Domain& dom, const SectionOptions& opt = {});

/// eta_cap = omega + 4 (1 + omega).
double default_cap(double omega);

/// Window view of E_L(t,x) = {(v,eta) : L(t,x,v) <= eta} for n = 1.
///
/// The window is [-W, W] x [eta_lo, eta_cap] with W = max(c(t)(1+|x|), reach)
/// and eta_lo = min(inf L, -reach) - 1, where `reach` is a radius the caller
/// needs to query around the origin (omega for the construction).
class EpigraphSection {
 public:
  EpigraphSection(const models::LagrangianModel& L, double t, double x, double growth_bound, double reach,
                  double eta_cap, const SectionOptions& opt = {});

  double t() const { return t_; }
  double x() const { return x_; }
  const models::Domain& domain() const { return dom_; }
  const std::vector<double>& dom_grid() const { return v_; }
  /// L at the dom grid nodes.
  const std::vector<double>& graph_values() const { return Lv_; }
  double eta_lo() const { return eta_lo_; }
  double eta_cap() const { return eta_cap_; }
  double half_width() const { return W_; }
  /// Largest gap of the dom grid.
  double h_v() const { return h_v_; }

  /// Throws WindowError for z outside the window.
  bool member(const Point& z) const;
  double distance(const Point& z) const;
  /// Hull of the graph samples and the two cap corners, built on construction.
  /// Throws WindowError for an open domain without `acknowledge_cap`.
  const geometry::ConvexBody& to_body() const;

  /// Rows `v,eta` of the lower (graph) and upper (cap) boundary samples.
  void write_boundary_csv(const std::filesystem::path& path) const;

 private:
  void check_window(const Point& z) const;

  const models::LagrangianModel* L_;
  double t_, x_;
  models::Domain dom_;
  std::vector<double> v_, Lv_;
  double eta_lo_ = 0.0, eta_cap_ = 0.0, W_ = 0.0, h_v_ = 0.0;
  bool acknowledge_cap_ = false;
  geometry::ConvexBody body_;
};

/// Hausdorff distance of the two bodies; the sections must share eta_cap.
double truncated_hausdorff(const EpigraphSection& a, const EpigraphSection& b);

}  // namespace hamrep::epigraph
