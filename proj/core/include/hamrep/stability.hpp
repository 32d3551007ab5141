#pragma once

#include <cstdint>
#include <vector>

#include "hamrep/conjugate.hpp"
#include "hamrep/convex_geometry.hpp"
#include "hamrep/models.hpp"
#include "hamrep/report.hpp"
#include "hamrep/representation.hpp"

namespace hamrep::stability {

enum class Rule {
  /// H_i = H + rho/i, L_i = L - rho/i, lambda_i = lambda.
  kShift,
  /// H_i = H + rho max(0, 1-|x|)/i, L_i = L - rho max(0, 1-|x|)/i.
  kBump,
  /// H fixed; base points move as x_i = x + rho/i, a_i = (1 - rho/(4i)) a.
  kDrift,
};

Rule parse_rule(std::string_view name);
std::string_view rule_name(Rule r);

struct PerturbationFamily {
  models::CatalogEntry base;
  Rule rule = Rule::kShift;
  double rho = 1.0;
  std::vector<int> schedule;

  /// H_i and L_i (the base entry for i = 0 or the drift rule).
  models::CatalogEntry member(int i) const;
  /// Base point of index i for the drift rule; the point itself otherwise.
  std::pair<double, Point> moved(double x, const Point& a, int i) const;
};

/// Indices 1..imax.
std::vector<int> full_schedule(int imax);

struct BasePoint {
  double t;
  double x;
  Point a;
};

struct StabilityReport {
  CheckReport report;
  std::vector<int> indices;
  /// max over points of |e_i - e| per index.
  std::vector<double> deviations;
  /// Least-squares fit deviation_i = C / i.
  double rate_constant = 0.0;
  double r_squared = 0.0;
  /// max over points of |e_i - e| / ((n+1) H(Phi_i, Phi)) per index; at
  /// most 1 when the Steiner chain bound holds.
  std::vector<double> chain_ratio;
};

/// Passes iff the last deviation is at most `tol` and the sequence is
/// nonincreasing up to 10% slack of its first value.
StabilityReport stability_audit_e(const PerturbationFamily& fam, const std::vector<BasePoint>& points,
                                  const representation::RepresentationOptions& opt = {}, double tol = 1e-2);

/// Least-squares C and R^2 for y_i = C / i.
std::pair<double, double> fit_inverse_rate(const std::vector<int>& i, const std::vector<double>& y);

struct SetSequenceProbe {
  std::vector<geometry::ConvexBody> bodies;
  geometry::ConvexBody target;
  std::vector<Point> probes;
};

struct SetLimitReport {
  CheckReport report;
  /// max over probes of |d(x, K_i) - d(x, K)| per body.
  std::vector<double> deviations;
};

/// Needs at least three bodies. Passes iff the last deviation is at most tol
/// and no later deviation exceeds an earlier one by more than 10% of the first.
SetLimitReport set_limit_check(const SetSequenceProbe& probe, double tol = 1e-2);

struct EpiReport {
  CheckReport report;
  /// max_x F(x) - F_i(x) per index (liminf inequality).
  std::vector<double> liminf_gap;
  /// max_x min_{|y-x| <= one cell} F_i(y) - F(x) per index (recovery).
  std::vector<double> recovery_gap;
};

/// Grid functions on a common grid. Passes iff both gaps of the last index
/// are at most `tol`.
EpiReport epi_convergence_check(const std::vector<conjugate::GridFunction>& Fi, const conjugate::GridFunction& F,
                                double tol = 1e-2);

}  // namespace hamrep::stability
