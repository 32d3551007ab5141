#include "hamrep/stability.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "hamrep/error.hpp"
#include "hamrep/parallel.hpp"

namespace hamrep::stability {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Perturbation added to H at index i (and subtracted from L).
std::function<double(double t, double x)> offset(Rule rule, double rho, int i) {
  const double s = rho / i;
  if (rule == Rule::kShift) return [s](double, double) { return s; };
  return [s](double, double x) { return s * std::max(0.0, 1.0 - std::abs(x)); };
}

// Nonincreasing up to `slack`.
bool nonincreasing(const std::vector<double>& y, double slack) {
  for (std::size_t i = 1; i < y.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (y[i] > y[j] + slack) return false;
    }
  }
  return true;
}

bool same_grid(const conjugate::Grid& a, const conjugate::Grid& b) {
  if (a.dimension() != b.dimension()) return false;
  for (int k = 0; k < a.dimension(); ++k) {
    const auto& x = a.axes()[static_cast<std::size_t>(k)];
    const auto& y = b.axes()[static_cast<std::size_t>(k)];
    if (x.lo != y.lo || x.step != y.step || x.count != y.count) return false;
  }
  return true;
}

double ext_diff(ExtReal a, ExtReal b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) return kInf;
  if (b.is_infinite()) return -kInf;
  return a.value() - b.value();
}

}  // namespace

Rule parse_rule(std::string_view name) {
  if (name == "shift") return Rule::kShift;
  if (name == "bump") return Rule::kBump;
  if (name == "drift") return Rule::kDrift;
  throw InputError(fmt::format("unknown perturbation rule '{}' (shift, bump, drift)", name));
}

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::kShift:
      return "shift";
    case Rule::kBump:
      return "bump";
    default:
      return "drift";
  }
}

models::CatalogEntry PerturbationFamily::member(int i) const {
  if (i < 0) throw InputError("perturbation index must be nonnegative");
  if (i == 0 || rule == Rule::kDrift) return base;
  models::CatalogEntry e = base;
  e.name = fmt::format("{}-{}{}", base.name, rule_name(rule), i);
  const auto H0 = base.hamiltonian;
  const auto L0 = base.lagrangian;
  const auto off = offset(rule, rho, i);
  e.hamiltonian.name = e.name;
  e.hamiltonian.H = [H0, off](double t, double x, double p) { return H0.H(t, x, p) + off(t, x); };
  if (rule == Rule::kBump) {
    const double s = rho / i;
    e.hamiltonian.k = [H0, s](double t, double R) { return H0.k(t, R) + s; };
  }
  e.lagrangian.name = e.name;
  e.lagrangian.L = [L0, off](double t, double x, double v) { return L0.L(t, x, v) + (-off(t, x)); };
  e.triples.clear();
  return e;
}

std::pair<double, Point> PerturbationFamily::moved(double x, const Point& a, int i) const {
  if (rule != Rule::kDrift || i == 0) return {x, a};
  if (rho < 0.0 || rho > 4.0) throw InputError("drift rule needs 0 <= rho <= 4");
  return {x + rho / i, a * (1.0 - rho / (4.0 * i))};
}

std::vector<int> full_schedule(int imax) {
  if (imax < 1) throw InputError("imax must be at least 1");
  std::vector<int> out(static_cast<std::size_t>(imax));
  for (int i = 0; i < imax; ++i) out[static_cast<std::size_t>(i)] = i + 1;
  return out;
}

std::pair<double, double> fit_inverse_rate(const std::vector<int>& idx, const std::vector<double>& y) {
  if (idx.size() != y.size() || idx.empty()) throw InputError("rate fit needs matching nonempty samples");
  double sxy = 0.0, sxx = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double u = 1.0 / idx[k];
    sxy += u * y[k];
    sxx += u * u;
    mean += y[k];
  }
  mean /= static_cast<double>(y.size());
  const double C = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    ss_res += std::pow(y[k] - C / idx[k], 2);
    ss_tot += std::pow(y[k] - mean, 2);
  }
  return {C, ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0)};
}

StabilityReport stability_audit_e(const PerturbationFamily& fam, const std::vector<BasePoint>& points,
                                  const representation::RepresentationOptions& opt, double tol) {
  if (fam.schedule.empty()) throw InputError("empty perturbation schedule");
  if (points.empty()) throw InputError("stability audit needs base points");
  StabilityReport out;
  out.report = CheckReport(fmt::format("stability_{}", rule_name(fam.rule)));
  out.report.tolerance = tol;
  out.indices = fam.schedule;

  const representation::Representation base(fam.base.hamiltonian, fam.base.lagrangian, opt);
  std::vector<representation::ConstructionTrace> ref(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) ref[k] = base.construct_e(points[k].t, points[k].x, points[k].a);

  out.deviations.assign(fam.schedule.size(), 0.0);
  out.chain_ratio.assign(fam.schedule.size(), 0.0);
  parallel_for(fam.schedule.size(), [&](std::size_t s) {
    const int i = fam.schedule[s];
    const auto e = fam.member(i);
    const representation::Representation rep(e.hamiltonian, e.lagrangian, opt);
    double dev = 0.0, ratio = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto [x, a] = fam.moved(points[k].x, points[k].a, i);
      const auto tr = rep.construct_e(points[k].t, x, a);
      const double d = distance(tr.e, ref[k].e);
      dev = std::max(dev, d);
      const double h = geometry::hausdorff(tr.phi, ref[k].phi);
      if (d > 0.0) ratio = std::max(ratio, h > 0.0 ? d / (2.0 * h) : kInf);
    }
    out.deviations[s] = dev;
    out.chain_ratio[s] = ratio;
  });
  for (std::size_t s = 0; s < fam.schedule.size(); ++s) {
    out.report.observe(out.deviations[s], {static_cast<double>(fam.schedule[s])});
  }
  std::tie(out.rate_constant, out.r_squared) = fit_inverse_rate(out.indices, out.deviations);
  out.report.empirical_constant = out.rate_constant;
  out.report.worst_violation = out.deviations.back();
  out.report.arg_worst = {static_cast<double>(fam.schedule.back())};
  out.report.pass = out.deviations.back() <= tol && nonincreasing(out.deviations, 0.1 * out.deviations.front());
  out.report.status = out.report.pass ? "CONVERGED" : "NOT_CONVERGED";
  return out;
}

SetLimitReport set_limit_check(const SetSequenceProbe& probe, double tol) {
  if (probe.bodies.size() < 3) throw InputError("set limit check needs at least three indices");
  if (probe.probes.empty()) throw InputError("set limit check needs probe points");
  SetLimitReport out;
  out.report = CheckReport("set_limit");
  out.report.tolerance = tol;
  std::vector<double> dK;
  for (const auto& x : probe.probes) dK.push_back(geometry::project(x, probe.target).distance);
  for (std::size_t i = 0; i < probe.bodies.size(); ++i) {
    double dev = 0.0;
    for (std::size_t j = 0; j < probe.probes.size(); ++j) {
      dev = std::max(dev, std::abs(geometry::project(probe.probes[j], probe.bodies[i]).distance - dK[j]));
    }
    out.deviations.push_back(dev);
    out.report.observe(dev, {static_cast<double>(i)});
  }
  out.report.worst_violation = out.deviations.back();
  out.report.arg_worst = {static_cast<double>(out.deviations.size() - 1)};
  out.report.pass = out.deviations.back() <= tol && nonincreasing(out.deviations, 0.1 * out.deviations.front());
  return out;
}

EpiReport epi_convergence_check(const std::vector<conjugate::GridFunction>& Fi, const conjugate::GridFunction& F,
                                double tol) {
  if (Fi.empty()) throw InputError("epi-convergence check needs a sequence");
  for (const auto& g : Fi) {
    if (!same_grid(g.grid, F.grid) || g.values.size() != F.values.size()) {
      throw InputError("epi-convergence check needs a common grid");
    }
  }
  EpiReport out;
  out.report = CheckReport("epi_convergence");
  out.report.tolerance = tol;
  const auto& axes = F.grid.axes();
  const std::size_t n = F.values.size();
  // Row-major neighbours within one cell.
  auto neighbours = [&](std::size_t flat) {
    std::vector<std::size_t> out_idx;
    if (axes.size() == 1) {
      const auto c = static_cast<std::size_t>(axes[0].count);
      for (std::size_t j = flat == 0 ? 0 : flat - 1; j <= std::min(flat + 1, c - 1); ++j) out_idx.push_back(j);
    } else {
      const auto c1 = static_cast<std::size_t>(axes[1].count), c0 = static_cast<std::size_t>(axes[0].count);
      const std::size_t i0 = flat / c1, i1 = flat % c1;
      for (std::size_t a = i0 == 0 ? 0 : i0 - 1; a <= std::min(i0 + 1, c0 - 1); ++a) {
        for (std::size_t b = i1 == 0 ? 0 : i1 - 1; b <= std::min(i1 + 1, c1 - 1); ++b) out_idx.push_back(a * c1 + b);
      }
    }
    return out_idx;
  };
  for (const auto& G : Fi) {
    double liminf = -kInf, recovery = -kInf;
    for (std::size_t x = 0; x < n; ++x) {
      liminf = std::max(liminf, ext_diff(F.values[x], G.values[x]));
      if (F.values[x].is_infinite()) continue;
      double best = kInf;
      for (std::size_t y : neighbours(x)) best = std::min(best, ext_diff(G.values[y], F.values[x]));
      recovery = std::max(recovery, best);
    }
    out.liminf_gap.push_back(liminf);
    out.recovery_gap.push_back(recovery);
    out.report.observe(std::max(liminf, recovery), {static_cast<double>(out.liminf_gap.size() - 1)});
  }
  out.report.worst_violation = std::max(out.liminf_gap.back(), out.recovery_gap.back());
  out.report.arg_worst = {static_cast<double>(Fi.size() - 1)};
  out.report.finish();
  return out;
}

}  // namespace hamrep::stability
