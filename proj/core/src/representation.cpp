#include "hamrep/representation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hamrep/error.hpp"
#include "hamrep/io.hpp"
#include "hamrep/parallel.hpp"

namespace hamrep::representation {
namespace {

double halton(std::uint64_t i, std::uint64_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

double growth_bound(const models::HamiltonianModel& H, double t, double x) { return H.c(t) * (1.0 + std::abs(x)); }

Point uniform_in_disc(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(u(rng)), th = 2.0 * std::numbers::pi * u(rng);
  return Point{r * std::cos(th), r * std::sin(th)};
}

// Keeps a point a little perturbed from a inside the closed unit disc.
Point clamp_to_disc(const Point& a) {
  const double n = norm(a);
  return n > 1.0 ? a * (1.0 / n) : a;
}

}  // namespace

double omega(const models::HamiltonianModel& H, const models::LagrangianModel& L, double t, double x) {
  if (!L.has_lambda()) throw BlcRequiredError(fmt::format("{}: L has no upper bound lambda", L.name));
  return std::abs(L.lambda(t, x)) + std::abs(H.H(t, x, 0.0)) + growth_bound(H, t, x) + 1.0;
}

Representation::Representation(models::HamiltonianModel H, models::LagrangianModel L, RepresentationOptions opt)
    : opt_(opt) {
  if (!L.has_lambda()) throw BlcRequiredError(fmt::format("{}: L has no upper bound lambda", L.name));
  if (opt.quadrature_nodes < 3 || opt.arc_samples < 3) throw InputError("quadrature and arc sample counts must be >= 3");
  H_ = std::make_shared<const models::HamiltonianModel>(std::move(H));
  L_ = std::make_shared<const models::LagrangianModel>(std::move(L));
  Q_ = std::make_shared<const geometry::SphereQuadrature>(geometry::SphereQuadrature::uniform(2, opt.quadrature_nodes));
}

double Representation::omega(double t, double x) const { return representation::omega(*H_, *L_, t, x); }

LocalRepresentation Representation::at(double t, double x) const { return LocalRepresentation(*this, t, x); }

ConstructionTrace Representation::construct_e(double t, double x, const Point& a) const { return at(t, x).trace(a); }

LocalRepresentation::LocalRepresentation(const Representation& rep, double t, double x)
    : H_(rep.H_), L_(rep.L_), Q_(rep.Q_), opt_(rep.opt_), t_(t), x_(x), omega_(rep.omega(t, x)) {
  section_ = std::make_shared<const epigraph::EpigraphSection>(*L_, t, x, growth_bound(*H_, t, x), omega_,
                                                               epigraph::default_cap(omega_), opt_.section);
  section_->to_body();
}

ConstructionTrace LocalRepresentation::trace(const Point& a) const {
  if (a.dim() != 2) throw InputError("controls live in the unit disc of R^2");
  if (norm(a) > 1.0 + 1e-12) throw InputError(fmt::format("control ({}, {}) lies outside the unit disc", a[0], a[1]));
  ConstructionTrace tr;
  tr.t = t_;
  tr.x = x_;
  tr.a = a;
  tr.omega = omega_;
  tr.center = a * omega_;
  const auto& body = section_->to_body();
  if (section_->member(tr.center)) {
    tr.singleton = true;
  } else {
    tr.d = geometry::project(tr.center, body).distance;
    tr.singleton = tr.d <= opt_.singleton_tol;
  }
  if (tr.singleton) {
    tr.phi = geometry::ConvexBody::singleton(tr.center);
    tr.e = tr.center;
    return tr;
  }
  tr.radius = 2.0 * tr.d;
  tr.phi = geometry::ball_intersect_P(tr.center, body, {opt_.arc_samples});
  for (const auto& v : tr.phi.vertices()) {
    if (v[1] >= section_->eta_cap()) {
      throw WindowError(fmt::format("Phi reaches the epigraph cap at (t={}, x={}, a=({}, {}))", t_, x_, a[0], a[1]));
    }
  }
  tr.e = opt_.steiner == SteinerRule::kExactPolygon ? geometry::steiner_point_exact(tr.phi)
                                                     : geometry::steiner_point(tr.phi, *Q_);
  return tr;
}

Point LocalRepresentation::e(const Point& a) const { return trace(a).e; }

std::vector<Point> LocalRepresentation::evaluate(std::span<const Point> controls) const {
  std::vector<Point> out(controls.size());
  parallel_for(controls.size(), [&](std::size_t i) { out[i] = e(controls[i]); });
  return out;
}

std::vector<Point> LocalRepresentation::graph_controls() const {
  std::vector<Point> out;
  const auto& v = section_->dom_grid();
  const auto& Lv = section_->graph_values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point z{v[i], Lv[i]};
    if (norm(z) <= omega_) out.push_back(clamp_to_disc(z * (1.0 / omega_)));
  }
  return out;
}

std::vector<Point> control_cloud(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double s1 = u(rng), s2 = u(rng);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double h1 = std::fmod(halton(i + 1, 2) + s1, 1.0);
    const double h2 = std::fmod(halton(i + 1, 3) + s2, 1.0);
    const double r = std::sqrt(h1), th = 2.0 * std::numbers::pi * h2;
    out.push_back(Point{r * std::cos(th), r * std::sin(th)});
  }
  return out;
}

SupResult sup_residuals(const models::HamiltonianModel& H, double t, double x, std::span<const double> ps,
                        std::span<const Point> e, double low_tol, double high_tol) {
  SupResult out;
  out.report = CheckReport("sup_formula");
  out.report.tolerance = 0.0;
  for (double p : ps) {
    double sup = -std::numeric_limits<double>::infinity();
    for (const auto& z : e) sup = std::max(sup, p * z[0] - z[1]);
    const double r = H.H(t, x, p) - sup;
    out.residuals.push_back(r);
    out.report.observe(std::max(-r - low_tol, r - high_tol), {t, x, p});
  }
  out.report.finish();
  return out;
}

SupResult verify_sup_formula(const LocalRepresentation& rep, std::span<const double> ps, std::span<const Point> cloud,
                             double low_tol, double high_tol) {
  std::vector<Point> controls(cloud.begin(), cloud.end());
  const auto g = rep.graph_controls();
  controls.insert(controls.end(), g.begin(), g.end());
  const auto e = rep.evaluate(controls);
  return sup_residuals(rep.hamiltonian(), rep.t(), rep.x(), ps, e, low_tol, high_tol);
}

double check_epi_membership(const models::LagrangianModel& L, double f, double l, double t, double x) {
  const ExtReal val = L.L(t, x, f);
  if (val.is_infinite()) return -std::numeric_limits<double>::infinity();
  return l - val.value();
}

SandwichReport verify_sandwich(const LocalRepresentation& rep, std::span<const Point> cloud, double member_tol,
                               double graph_tol) {
  SandwichReport out{CheckReport("sandwich_upper"), CheckReport("sandwich_lower"), CheckReport("range_identity")};
  out.upper.tolerance = member_tol;
  out.lower.tolerance = graph_tol;
  out.range.tolerance = graph_tol;
  const auto& S = rep.section();
  const double t = rep.t(), x = rep.x();

  std::vector<Point> targets;
  std::vector<Point> controls(cloud.begin(), cloud.end());
  for (std::size_t i = 0; i < S.dom_grid().size(); ++i) {
    const Point z{S.dom_grid()[i], S.graph_values()[i]};
    if (norm(z) <= rep.omega()) {
      targets.push_back(z);
      const Point a = z * (1.0 / rep.omega());
      controls.push_back(norm(a) > 1.0 ? a * (1.0 / norm(a)) : a);
    }
  }
  const auto e = rep.evaluate(controls);
  const models::Domain dom = S.domain();
  std::vector<double> fs;
  fs.reserve(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double slack = check_epi_membership(rep.lagrangian(), e[k][0], e[k][1], t, x);
    out.upper.observe(-slack, {t, x, controls[k][0], controls[k][1]});
    fs.push_back(e[k][0]);
    out.range.observe(std::max({dom.lo - e[k][0], e[k][0] - dom.hi, 0.0}) - (dom.open ? 0.0 : 1e-12),
                      {t, x, controls[k][0], controls[k][1]});
  }
  const std::size_t first_graph = cloud.size();
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& a = controls[first_graph + i];
    out.lower.observe(distance(e[first_graph + i], targets[i]), {t, x, a[0], a[1]});
  }
  std::sort(fs.begin(), fs.end());
  for (double v : S.dom_grid()) {
    const auto it = std::lower_bound(fs.begin(), fs.end(), v);
    double gap = std::numeric_limits<double>::infinity();
    if (it != fs.end()) gap = std::min(gap, *it - v);
    if (it != fs.begin()) gap = std::min(gap, v - *std::prev(it));
    out.range.observe(gap, {t, x, v});
  }
  out.upper.finish();
  out.lower.finish();
  out.range.finish();
  return out;
}

double a1_bound(const models::HamiltonianModel& H, const models::LagrangianModel& L, double t, double R) {
  if (!L.has_lambda()) throw BlcRequiredError(fmt::format("{}: L has no upper bound lambda", L.name));
  const double omega_R = std::abs(L.lambda(t, 0.0)) + std::abs(H.H(t, 0.0, 0.0)) + H.c(t) * (2.0 + R);
  constexpr int n = 1;
  return 10.0 * (n + 1) * (omega_R + 3.0 * (1.0 + R) * H.k(t, R) + 1.0);
}

LipschitzReport audit_lipschitz_A1(const Representation& rep, double R, const PairPlan& plan) {
  if (plan.times.empty()) throw InputError("pair plan needs at least one time");
  const auto& H = rep.hamiltonian();
  const auto& L = rep.lagrangian();
  struct Pair {
    double t, x, y;
    Point a, b;
  };
  std::vector<Pair> pairs(plan.pairs);
  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> ux(-R, R), us(-1.0, 1.0);
  for (std::size_t i = 0; i < plan.pairs; ++i) {
    Pair& q = pairs[i];
    q.t = plan.times[i % plan.times.size()];
    q.x = ux(rng);
    q.a = uniform_in_disc(rng);
    if (i % 2 == 1) {
      q.y = std::clamp(q.x + plan.local_scale * us(rng), -R, R);
      q.b = clamp_to_disc(q.a + uniform_in_disc(rng) * plan.local_scale);
    } else {
      q.y = ux(rng);
      q.b = uniform_in_disc(rng);
    }
  }

  struct Outcome {
    double qf = 0.0, ql = 0.0, a2 = -std::numeric_limits<double>::infinity();
    double inter = -std::numeric_limits<double>::infinity();
  };
  std::vector<Outcome> res(pairs.size());
  const double arc_err = 1.0 - std::cos(std::numbers::pi / rep.options().arc_samples);
  parallel_for(pairs.size(), [&](std::size_t i) {
    const Pair& q = pairs[i];
    const auto rx = rep.at(q.t, q.x), ry = rep.at(q.t, q.y);
    const auto tx = rx.trace(q.a), ty = ry.trace(q.b);
    const double den = std::abs(q.x - q.y) + distance(q.a, q.b);
    Outcome& o = res[i];
    if (den > 0.0) {
      o.qf = std::abs(tx.f() - ty.f()) / den;
      o.ql = std::abs(tx.l() - ty.l()) / den;
    }
    o.a2 = std::max(std::abs(tx.f()) - growth_bound(H, q.t, q.x), std::abs(ty.f()) - growth_bound(H, q.t, q.y));
    if (i < plan.intermediate_pairs) {
      const double cap = std::max(epigraph::default_cap(tx.omega), epigraph::default_cap(ty.omega));
      const epigraph::EpigraphSection Sx(L, q.t, q.x, growth_bound(H, q.t, q.x), tx.omega, cap,
                                         rep.options().section);
      const epigraph::EpigraphSection Sy(L, q.t, q.y, growth_bound(H, q.t, q.y), ty.omega, cap,
                                         rep.options().section);
      const double haus = epigraph::truncated_hausdorff(Sx, Sy);
      const double bound = 5.0 * 2.0 * (haus + distance(tx.center, ty.center));
      // The P operator samples the ball boundary; its chord error enters
      // both constructions.
      const double allowance = 1e-9 + 10.0 * arc_err * (tx.radius + ty.radius);
      o.inter = distance(tx.e, ty.e) - bound * (1.0 + 1e-6) - allowance;
    }
  });

  LipschitzReport out{CheckReport("A1_f"), CheckReport("A1_l"), CheckReport("A1_intermediate"), CheckReport("A2")};
  double bound = 0.0;
  for (double t : plan.times) bound = std::max(bound, a1_bound(H, L, t, R));
  out.bound = bound;
  out.a2.tolerance = 1e-9;
  double max_qf = 0.0, max_ql = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Pair& q = pairs[i];
    const double b = a1_bound(H, L, q.t, R) * (1.0 + 1e-6);
    const std::vector<double> where{q.t, q.x, q.a[0], q.a[1], q.y, q.b[0], q.b[1]};
    out.a1_f.observe(res[i].qf - b, where);
    out.a1_l.observe(res[i].ql - b, where);
    out.a2.observe(res[i].a2, where);
    if (i < plan.intermediate_pairs) out.intermediate.observe(res[i].inter, where);
    max_qf = std::max(max_qf, res[i].qf);
    max_ql = std::max(max_ql, res[i].ql);
  }
  out.a1_f.empirical_constant = max_qf;
  out.a1_l.empirical_constant = max_ql;
  out.a1_f.finish();
  out.a1_l.finish();
  out.intermediate.finish();
  out.a2.finish();
  return out;
}

CheckReport continuity_audit(const TripleFn& fn, std::span<const double> ts, std::span<const double> xs,
                             std::span<const Point> controls, int levels, double tol) {
  CheckReport out("continuity");
  out.tolerance = tol;
  double modulus = 0.0;
  for (double t : ts) {
    for (double x : xs) {
      for (const auto& a : controls) {
        const Point base = fn(t, x, a);
        double dev = 0.0;
        for (int k = 1; k <= levels; ++k) {
          const double h = std::ldexp(1.0, -k);
          dev = distance(fn(t, x + h, a), base);
          modulus = std::max(modulus, dev / h);
        }
        out.observe(dev, {t, x, a[0], a[1]});
      }
    }
  }
  out.empirical_constant = modulus;
  out.finish();
  return out;
}

ConvexifiedTriple::ConvexifiedTriple(std::vector<Point> A, Fn f, Fn l)
    : A_(std::move(A)), f_(std::move(f)), l_(std::move(l)) {
  if (A_.empty()) throw InputError("convexification needs a nonempty control set");
}

double ConvexifiedTriple::f(double t, double x, std::size_t i0, std::size_t i1, double alpha) const {
  if (alpha < 0.0 || alpha > 1.0) throw InputError("simplex weight outside [0,1]");
  return alpha * f_(t, x, A_.at(i0)) + (1.0 - alpha) * f_(t, x, A_.at(i1));
}

double ConvexifiedTriple::l(double t, double x, std::size_t i0, std::size_t i1, double alpha) const {
  if (alpha < 0.0 || alpha > 1.0) throw InputError("simplex weight outside [0,1]");
  return alpha * l_(t, x, A_.at(i0)) + (1.0 - alpha) * l_(t, x, A_.at(i1));
}

double ConvexifiedTriple::lambda(double t, double x, int weight_samples) const {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < A_.size(); ++i) {
    for (std::size_t j = 0; j < A_.size(); ++j) {
      for (int k = 0; k < weight_samples; ++k) {
        const double alpha = weight_samples == 1 ? 1.0 : static_cast<double>(k) / (weight_samples - 1);
        best = std::max(best, l(t, x, i, j, alpha));
      }
    }
  }
  return best;
}

std::pair<double, double> ConvexifiedTriple::f_range(double t, double x, int weight_samples) const {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < A_.size(); ++i) {
    for (std::size_t j = 0; j < A_.size(); ++j) {
      for (int k = 0; k < weight_samples; ++k) {
        const double alpha = weight_samples == 1 ? 1.0 : static_cast<double>(k) / (weight_samples - 1);
        const double v = f(t, x, i, j, alpha);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  return {lo, hi};
}

ConvexifiedTriple convexify(std::vector<Point> A, ConvexifiedTriple::Fn f, ConvexifiedTriple::Fn l) {
  return ConvexifiedTriple(std::move(A), std::move(f), std::move(l));
}

void write_traces_csv(const std::filesystem::path& path, std::span<const ConstructionTrace> traces) {
  std::string out = "t,x,a1,a2,omega,d,e_f,e_l\n";
  for (const auto& tr : traces) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", io::format_double(tr.t), io::format_double(tr.x),
                       io::format_double(tr.a[0]), io::format_double(tr.a[1]), io::format_double(tr.omega),
                       io::format_double(tr.d), io::format_double(tr.f()), io::format_double(tr.l()));
  }
  io::write_file_atomic(path, out);
}

}  // namespace hamrep::representation
