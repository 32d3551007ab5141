#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hamrep/convex_geometry.hpp"
#include "hamrep/epigraph.hpp"
#include "hamrep/models.hpp"
#include "hamrep/report.hpp"

namespace hamrep::representation {

enum class SteinerRule {
  /// Exterior-angle formula, exact on polygons.
  kExactPolygon,
  /// Trapezoid circle rule with `quadrature_nodes` nodes.
  kQuadrature,
};

struct RepresentationOptions {
  epigraph::SectionOptions section;
  SteinerRule steiner = SteinerRule::kExactPolygon;
  /// Circle rule for the Steiner point of Phi (m = n + 1 = 2).
  int quadrature_nodes = geometry::SphereQuadrature::kDefaultCircleNodes;
  /// Boundary samples of the ball G in the P operator.
  int arc_samples = 256;
  double singleton_tol = 1e-12;
};

/// omega(t,x) = |lambda(t,x)| + |H(t,x,0)| + c(t)(1+|x|) + 1. Throws
/// BlcRequiredError when L carries no lambda.
double omega(const models::HamiltonianModel& H, const models::LagrangianModel& L, double t, double x);

/// Everything computed for one (t,x,a).
struct ConstructionTrace {
  double t = 0.0;
  double x = 0.0;
  Point a;
  double omega = 0.0;
  Point center;
  double d = 0.0;
  double radius = 0.0;
  geometry::ConvexBody phi;
  Point e;
  bool singleton = false;

  double f() const { return e[0]; }
  double l() const { return e[1]; }
};

class Representation;

/// The construction frozen at one (t,x): the section, its body and omega are
/// computed once and shared by every control.
class LocalRepresentation {
 public:
  double t() const { return t_; }
  double x() const { return x_; }
  double omega() const { return omega_; }
  const epigraph::EpigraphSection& section() const { return *section_; }
  const models::HamiltonianModel& hamiltonian() const { return *H_; }
  const models::LagrangianModel& lagrangian() const { return *L_; }

  ConstructionTrace trace(const Point& a) const;
  /// e(t,x,a) = (f, l).
  Point e(const Point& a) const;
  /// e for every control, in order (parallel over controls).
  std::vector<Point> evaluate(std::span<const Point> controls) const;
  /// a = (v, L(v)) / omega for the dom grid nodes with |(v, L(v))| <= omega.
  std::vector<Point> graph_controls() const;

 private:
  friend class Representation;
  LocalRepresentation(const Representation& rep, double t, double x);

  std::shared_ptr<const models::HamiltonianModel> H_;
  std::shared_ptr<const models::LagrangianModel> L_;
  std::shared_ptr<const geometry::SphereQuadrature> Q_;
  RepresentationOptions opt_;
  double t_, x_, omega_;
  std::shared_ptr<const epigraph::EpigraphSection> section_;
};

/// The triple (B, f, l) built from H for n = 1; controls live in the unit
/// disc of R^2. Copies share the underlying models.
class Representation {
 public:
  /// Throws BlcRequiredError when the Lagrangian has no lambda.
  Representation(models::HamiltonianModel H, models::LagrangianModel L, RepresentationOptions opt = {});

  const models::HamiltonianModel& hamiltonian() const { return *H_; }
  const models::LagrangianModel& lagrangian() const { return *L_; }
  const RepresentationOptions& options() const { return opt_; }
  const geometry::SphereQuadrature& quadrature() const { return *Q_; }

  double omega(double t, double x) const;
  LocalRepresentation at(double t, double x) const;
  ConstructionTrace construct_e(double t, double x, const Point& a) const;

 private:
  friend class LocalRepresentation;
  std::shared_ptr<const models::HamiltonianModel> H_;
  std::shared_ptr<const models::LagrangianModel> L_;
  std::shared_ptr<const geometry::SphereQuadrature> Q_;
  RepresentationOptions opt_;
};

/// First `count` points of a Halton (2,3) sequence with a seeded
/// Cranley-Patterson shift, mapped to the unit disc. Prefixes are nested.
std::vector<Point> control_cloud(std::size_t count, std::uint64_t seed);

struct SupResult {
  CheckReport report;
  /// H(t,x,p) - sampled sup, per p.
  std::vector<double> residuals;
};

/// Residuals H(t,x,p) - max_k (p f_k - l_k) over the precomputed points
/// e_k = (f_k, l_k). Violation per p is max(-r - low_tol, r - high_tol).
SupResult sup_residuals(const models::HamiltonianModel& H, double t, double x, std::span<const double> ps,
                        std::span<const Point> e, double low_tol = 1e-9, double high_tol = 5e-2);

/// verify_sup_formula at one (t,x): the cloud plus the graph controls.
SupResult verify_sup_formula(const LocalRepresentation& rep, std::span<const double> ps,
                             std::span<const Point> cloud, double low_tol = 1e-9, double high_tol = 5e-2);

struct SandwichReport {
  /// Slack L(f) - l of each sampled e; tolerance `member_tol`.
  CheckReport upper;
  /// |e(a_v) - (v, L(v))| for the graph controls; tolerance `graph_tol`.
  CheckReport lower;
  /// Distance of each dom node to the sampled f values, and of f values to
  /// the domain.
  CheckReport range;
  bool pass() const { return upper.pass && lower.pass && range.pass; }
};

SandwichReport verify_sandwich(const LocalRepresentation& rep, std::span<const Point> cloud, double member_tol = 1e-6,
                               double graph_tol = 1e-6);

/// l - L(t,x,f); -inf when f leaves dom L(t,x,.).
double check_epi_membership(const models::LagrangianModel& L, double f, double l, double t, double x);

struct LipschitzReport {
  /// Quotients |f(x,a)-f(y,b)| / (|x-y|+|a-b|) against the (A1) bound.
  CheckReport a1_f;
  CheckReport a1_l;
  /// |e(x,a)-e(y,b)| against 5m[H(E(x),E(y)) + |omega(x)a - omega(y)b|].
  CheckReport intermediate;
  /// |f| against c(t)(1+|x|), tolerance 1e-9.
  CheckReport a2;
  double bound = 0.0;
  bool pass() const { return a1_f.pass && a1_l.pass && intermediate.pass && a2.pass; }
};

/// 10(n+1)(omega_R + 3(1+R)k_R + 1), omega_R = |lambda(t,0)| + |H(t,0,0)| + c(t)(2+R).
double a1_bound(const models::HamiltonianModel& H, const models::LagrangianModel& L, double t, double R);

struct PairPlan {
  std::size_t pairs = 10000;
  /// Half of the pairs are local: y = x + delta, b = a + delta', with
  /// deltas of this scale.
  double local_scale = 1e-2;
  std::vector<double> times{0.0};
  std::uint64_t seed = 1;
  /// Pairs also checked against the intermediate bound (two extra sections
  /// each).
  std::size_t intermediate_pairs = 200;
};

LipschitzReport audit_lipschitz_A1(const Representation& rep, double R, const PairPlan& plan);

/// Generic evaluator (t, x, a) -> (f, l).
using TripleFn = std::function<Point(double t, double x, const Point& a)>;

/// Continuity surrogate: for every base (t,x,a) the deviation of the triple
/// along x + 2^-k, k = 1..levels, must fall below `tol` at the finest level.
/// The empirical constant is the largest quotient deviation / 2^-k seen.
CheckReport continuity_audit(const TripleFn& fn, std::span<const double> ts, std::span<const double> xs,
                             std::span<const Point> controls, int levels = 30, double tol = 1e-6);

/// Convexified triple over A^{n+1} x simplex for a finite base set A (n = 1).
class ConvexifiedTriple {
 public:
  using Fn = std::function<double(double t, double x, const Point& a)>;
  /// Throws InputError for an empty control list.
  ConvexifiedTriple(std::vector<Point> A, Fn f, Fn l);

  const std::vector<Point>& controls() const { return A_; }
  /// f at indices (i0, i1) with weights (alpha, 1 - alpha).
  double f(double t, double x, std::size_t i0, std::size_t i1, double alpha) const;
  double l(double t, double x, std::size_t i0, std::size_t i1, double alpha) const;
  /// max over sampled A^2 x simplex of the convexified l.
  double lambda(double t, double x, int weight_samples = 11) const;
  /// [min, max] of the convexified f over the samples.
  std::pair<double, double> f_range(double t, double x, int weight_samples = 11) const;

 private:
  std::vector<Point> A_;
  Fn f_, l_;
};

ConvexifiedTriple convexify(std::vector<Point> A, ConvexifiedTriple::Fn f, ConvexifiedTriple::Fn l);

/// Plot rows `t,x,a1,a2,omega,d,e_f,e_l`.
void write_traces_csv(const std::filesystem::path& path, std::span<const ConstructionTrace> traces);

}  // namespace hamrep::representation
