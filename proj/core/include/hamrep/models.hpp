#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hamrep/ext_real.hpp"
#include "hamrep/report.hpp"

namespace hamrep::models {

/// Hamiltonian H(t,x,p) with scalar state and covector (n = 1).
struct HamiltonianModel {
  std::string name;
  std::function<double(double t, double x, double p)> H;
  /// Growth coefficient: |H(t,x,p) - H(t,x,q)| <= c(t)(1+|x|)|p-q|.
  std::function<double(double t)> c;
  /// Local Lipschitz modulus k_R(t) in x on the ball of radius R.
  std::function<double(double t, double R)> k;
  /// Recession function lim_{s->inf} H(t,x,s d)/s, i.e. the support function
  /// of dom L(t,x,.). Optional; the x-Lipschitz audit uses it to see the
  /// behaviour of H at infinity.
  std::function<double(double t, double x, double d)> recession;
  double T = 1.0;
  bool continuous = true;
  /// H does not depend on t; lets solvers reuse per-state work across time.
  bool autonomous = false;
};

/// Effective domain of v -> L(t,x,v): an interval, possibly open.
struct Domain {
  double lo = 0.0;
  double hi = 0.0;
  bool open = false;

  static constexpr double kSlack = 1e-12;
  /// Closed intervals admit 1e-12 slack; open ones need strict interior.
  bool contains(double v) const;
  bool is_singleton() const { return lo == hi; }
  double width() const { return hi - lo; }
  /// Inner sampling range: the interval itself, or for an open domain the
  /// interval shrunk by 2^-40 of its width at each end.
  double inner_lo() const;
  double inner_hi() const;
};

enum class Provenance { kClosedForm, kGridConjugate };

/// Lagrangian L(t,x,v) = sup_p { v p - H(t,x,p) } with its domain and, when
/// it is bounded above on the domain, the bound lambda(t,x).
struct LagrangianModel {
  std::string name;
  std::function<ExtReal(double t, double x, double v)> L;
  std::function<Domain(double t, double x)> dom;
  std::function<double(double t, double x)> lambda;
  Provenance provenance = Provenance::kClosedForm;

  bool has_lambda() const { return static_cast<bool>(lambda); }
};

/// An explicitly given triple (A, f, l) for a catalog Hamiltonian.
struct ExplicitTriple {
  enum class ControlSet { kInterval, kSquare, kDisc };
  std::string name;
  ControlSet control_set = ControlSet::kInterval;
  std::function<double(double t, double x, const std::vector<double>& a)> f;
  std::function<double(double t, double x, const std::vector<double>& a)> l;
  bool continuous = true;

  int control_dim() const { return control_set == ControlSet::kInterval ? 1 : 2; }
};

struct CatalogEntry {
  std::string name;
  std::string description;
  HamiltonianModel hamiltonian;
  LagrangianModel lagrangian;
  bool blc_holds = true;
  std::vector<ExplicitTriple> triples;
};

/// EX1, EX2, EX4 and ABS, in that order.
const std::vector<CatalogEntry>& catalog();
/// Throws InputError for an unknown name.
const CatalogEntry& find_entry(std::string_view name);

/// H(t,x,p) = (1+t) H0(x,p), with L, lambda, c, k and the domain rescaled to
/// match. Exercises the time argument of every module.
CatalogEntry time_scaled(const CatalogEntry& base);

/// Members of the family f_i(x,a) = a(1+|a| i(x))/(1+i(x)),
/// l_j(x,a) = (1-|a|) j(x) representing H = |p|, for nonnegative i, j.
ExplicitTriple abs_family_triple(std::function<double(double)> i, std::function<double(double)> j);

/// Model from a tensor grid of samples `x,p,H`. H is interpolated linearly in
/// x and piecewise linearly in p with linear extrapolation, so L(t,x,.) is the
/// exact conjugate of a piecewise-linear function: finite on the slope range
/// and bounded there by lambda(x) = max of its endpoint values.
CatalogEntry load_grid_model(const std::filesystem::path& path);

/// Tensor sampling plan for the checkers.
struct SamplePlan {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> p;

  /// nt nodes on [0,T], nx nodes on [-R,R], np nodes on [-P,P].
  static SamplePlan uniform(double T, int nt, double R, int nx, double P, int np);
};

/// Reports `H1_finite`, `H2_continuity`, `H3_convexity`, `H4_growth`.
std::vector<CheckReport> check_H1_H4(const HamiltonianModel& H, const SamplePlan& plan, double tol = 1e-9);

/// Worst ratio |H(t,x,p)-H(t,y,p)| / ((1+|p|)|x-y|) over x, y in the plan,
/// including the recession term when available. Passes iff the ratio stays
/// below k(1+1e-9). The empirical constant is the worst ratio.
CheckReport check_HLC(const HamiltonianModel& H, double R, double k, const SamplePlan& plan);

struct LlcElcReport {
  CheckReport llc;
  CheckReport elc;
};

/// For every (t,x,y) of the plan and v in dom L(t,x,.) (`nv` samples),
/// minimizes L(t,y,u) over |u-v| <= k|x-y| and records the slack
/// L(t,y,u) - L(t,x,v) - k|x-y|. ELC is checked the same way at epigraph
/// points (v, L + s). Empirical constants come from bisection on k.
LlcElcReport check_LLC_ELC(const LagrangianModel& L, double R, double k, const SamplePlan& plan, int nv = 9,
                           double tol = 1e-9);

struct BlcOptions {
  double threshold = 1e6;
  int filtration_steps = 8;
  /// Use lambda from the model when present; otherwise probe for growth.
  bool use_lambda = true;
};

/// With lambda: L <= lambda on sampled domains and an empirical Lipschitz
/// constant for lambda. Without: at each (t,x) with a nondegenerate domain,
/// evaluates L at v_k = (1 - 10^-k) times each domain endpoint; status
/// UNBOUNDED when the values increase monotonically past the threshold.
CheckReport check_BLC(const LagrangianModel& L, const SamplePlan& plan, const BlcOptions& opt = {});

}  // namespace hamrep::models
