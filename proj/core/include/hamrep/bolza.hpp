#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hamrep/ext_real.hpp"
#include "hamrep/models.hpp"
#include "hamrep/report.hpp"
#include "hamrep/representation.hpp"

namespace hamrep::bolza {

/// Endpoint cost phi(z, x) on (x(t0), x(T)), either general or in the
/// terminal form psi_{x0}(z) + g(x).
struct EndpointCost {
  std::function<ExtReal(double z, double x)> phi;
  std::optional<double> x0;
  std::function<ExtReal(double x)> g;

  static EndpointCost terminal(double x0, std::function<ExtReal(double x)> g);
  static EndpointCost general(std::function<ExtReal(double z, double x)> phi);
  ExtReal operator()(double z, double x) const;
};

struct BolzaSpec {
  EndpointCost cost;
  /// min{|z|, |x|} <= M on dom phi.
  double M = 0.0;
  double t0 = 0.0;
  double T = 1.0;
  int Nt = 50;
  int Nx = 201;
  /// State grid radius; 0 selects the Gronwall radius.
  double radius = 0.0;
  /// Velocity nodes per state: the dom grid of the representation.
  epigraph::SectionOptions velocity_grid;
  /// Cloud controls per state for the control problem, on top of the graph
  /// controls.
  std::size_t cloud = 64;
  std::uint64_t seed = 1;
};

/// R = (M + int c) exp(int c) with the trapezoid rule on uniform samples of c
/// over [t0, T]. Throws InputError on a negative sample.
double gronwall_radius(double M, std::span<const double> c_samples, double t0 = 0.0, double T = 1.0);
double gronwall_radius(const BolzaSpec& spec, const models::HamiltonianModel& H);

/// Values V(t_k, x_j) on the time-by-state grid, row-major in k.
struct ValueTable {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<ExtReal> V;

  ExtReal at(std::size_t k, std::size_t j) const { return V[k * x.size() + j]; }
  /// Linear interpolation in x at time slice k; +inf when a neighbour is
  /// +inf or y leaves the grid.
  ExtReal interpolate(std::size_t k, double y) const;
  /// Rows `t,x,V`.
  void write_csv(const std::filesystem::path& path) const;
  /// Largest difference quotient of V(t_k, .) between finite neighbours.
  double lipschitz_modulus(std::size_t k) const;
};

struct ArcPoint {
  double t = 0.0;
  double x = 0.0;
  /// Velocity used on [t, t + h_t]; the last point carries 0.
  double v = 0.0;
  /// Control (empty for the variational problem).
  std::optional<Point> a;
};

struct BolzaResult {
  ExtReal value;
  std::vector<ArcPoint> arc;
  ValueTable table;
  double radius = 0.0;
  double h_t = 0.0;
  double h_x = 0.0;
  /// (T - t0) times the largest dom-grid spacing over the state grid.
  double sample_gap = 0.0;
  /// "OK" or "INFEASIBLE".
  std::string status;
};

/// Throws InputError when phi violates the M condition on grid nodes or the
/// state grid is smaller than the Gronwall radius.
void validate(const BolzaSpec& spec, const models::HamiltonianModel& H);

/// Backward DP for (P_v) with x' = x + h_t v over the dom grid of L(t,x,.)
/// (|v| <= c(t)(1+|x|)) and left-endpoint running cost.
BolzaResult solve_variational(const BolzaSpec& spec, const models::HamiltonianModel& H,
                              const models::LagrangianModel& L);

/// Backward DP for (P_c) with x' = x + h_t f(t,x,a) over the graph controls
/// and `spec.cloud` cloud controls.
BolzaResult solve_control(const BolzaSpec& spec, const representation::Representation& rep);

/// Value table on [t0, T] for the terminal cost g (spec.cost.g).
ValueTable value_function(const BolzaSpec& spec, const models::HamiltonianModel& H, const models::LagrangianModel& L);
ValueTable value_function(const BolzaSpec& spec, const representation::Representation& rep);

/// -D - R int k_R - int |H(t,0,0)| with D = max(0, -min phi) over grid nodes in
/// the ball of radius R.
double lower_bound(const BolzaSpec& spec, const models::HamiltonianModel& H);

/// Rows `t,x,v` (variational) or `t,x,v,a1,a2` (control).
void write_arc_csv(const std::filesystem::path& path, const std::vector<ArcPoint>& arc);

}  // namespace hamrep::bolza
