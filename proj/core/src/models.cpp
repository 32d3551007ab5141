#include "hamrep/models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "hamrep/error.hpp"
#include "hamrep/io.hpp"
#include "hamrep/parallel.hpp"

namespace hamrep::models {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed-form Lagrangians are evaluated at the projection of v onto the
// domain when v is within the membership slack.
template <class F>
ExtReal on_domain(const Domain& d, double v, F&& formula) {
  if (!d.contains(v)) return ExtReal::infinity();
  return ExtReal(formula(std::clamp(v, d.lo, d.hi)));
}

Domain symmetric(double r, bool open) {
  if (r == 0.0) return Domain{0.0, 0.0, false};
  return Domain{-r, r, open};
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  if (n == 1) return {0.5 * (a + b)};
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

// Domain sample nodes: endpoints included for closed domains.
std::vector<double> domain_samples(const Domain& d, int n) {
  if (d.is_singleton()) return {d.lo};
  return linspace(d.inner_lo(), d.inner_hi(), std::max(n, 2));
}

CatalogEntry make_ex1() {
  CatalogEntry e;
  e.name = "EX1";
  e.description = "H = max{|p||x| - 1, 0}, L = |v/x| on [-|x|,|x|]";
  auto& H = e.hamiltonian;
  H.name = "EX1";
  H.autonomous = true;
  H.H = [](double, double x, double p) { return std::max(std::abs(p) * std::abs(x) - 1.0, 0.0); };
  H.c = [](double) { return 1.0; };
  H.k = [](double, double) { return 1.0; };
  H.recession = [](double, double x, double d) { return std::abs(x) * std::abs(d); };
  auto& L = e.lagrangian;
  L.name = "EX1";
  L.dom = [](double, double x) { return symmetric(std::abs(x), false); };
  L.L = [](double, double x, double v) {
    const Domain d = symmetric(std::abs(x), false);
    return on_domain(d, v, [x](double u) { return x == 0.0 ? 0.0 : std::abs(u / x); });
  };
  L.lambda = [](double, double) { return 1.0; };
  e.blc_holds = true;

  ExplicitTriple box;
  box.name = "EX1-box";
  box.control_set = ExplicitTriple::ControlSet::kSquare;
  box.f = [](double, double x, const std::vector<double>& a) { return a[0] * std::abs(x); };
  box.l = [](double, double, const std::vector<double>& a) {
    return std::abs(a[0]) + std::abs(a[1]) * (1.0 - std::abs(a[0]));
  };
  ExplicitTriple graph;
  graph.name = "EX1-graphical";
  graph.control_set = ExplicitTriple::ControlSet::kInterval;
  graph.f = [](double, double x, const std::vector<double>& a) { return a[0] * std::abs(x); };
  graph.l = [](double, double x, const std::vector<double>& a) { return x != 0.0 ? std::abs(a[0]) : 0.0; };
  graph.continuous = false;
  e.triples = {box, graph};
  return e;
}

CatalogEntry make_ex2() {
  CatalogEntry e;
  e.name = "EX2";
  e.description = "H = sqrt(1+p^2) - |x|, L = |x| - sqrt(1-v^2) on [-1,1]";
  auto& H = e.hamiltonian;
  H.name = "EX2";
  H.autonomous = true;
  H.H = [](double, double x, double p) { return std::sqrt(1.0 + p * p) - std::abs(x); };
  H.c = [](double) { return 1.0; };
  H.k = [](double, double) { return 1.0; };
  H.recession = [](double, double, double d) { return std::abs(d); };
  auto& L = e.lagrangian;
  L.name = "EX2";
  L.dom = [](double, double) { return Domain{-1.0, 1.0, false}; };
  L.L = [](double, double x, double v) {
    return on_domain(Domain{-1.0, 1.0, false}, v, [x](double u) { return std::abs(x) - std::sqrt(1.0 - u * u); });
  };
  L.lambda = [](double, double x) { return std::abs(x); };
  e.blc_holds = true;

  ExplicitTriple disc;
  disc.name = "EX2-disc";
  disc.control_set = ExplicitTriple::ControlSet::kDisc;
  disc.f = [](double, double, const std::vector<double>& a) { return a[0]; };
  disc.l = [](double, double x, const std::vector<double>& a) { return a[1] + std::abs(x); };
  ExplicitTriple graph;
  graph.name = "EX2-graphical";
  graph.control_set = ExplicitTriple::ControlSet::kInterval;
  graph.f = [](double, double, const std::vector<double>& a) { return a[0]; };
  graph.l = [](double, double x, const std::vector<double>& a) {
    return std::abs(x) - std::sqrt(std::max(0.0, 1.0 - a[0] * a[0]));
  };
  e.triples = {disc, graph};
  return e;
}

CatalogEntry make_ex4() {
  CatalogEntry e;
  e.name = "EX4";
  e.description = "H = (sqrt|xp| - 1)^2 for |xp| > 1 else 0, L = |v|/(|x|-|v|) on (-|x|,|x|)";
  auto& H = e.hamiltonian;
  H.name = "EX4";
  H.autonomous = true;
  H.H = [](double, double x, double p) {
    const double s = std::abs(x * p);
    if (s <= 1.0) return 0.0;
    const double r = std::sqrt(s) - 1.0;
    return r * r;
  };
  H.c = [](double) { return 1.0; };
  H.k = [](double, double) { return 1.0; };
  H.recession = [](double, double x, double d) { return std::abs(x) * std::abs(d); };
  auto& L = e.lagrangian;
  L.name = "EX4";
  L.dom = [](double, double x) { return symmetric(std::abs(x), true); };
  L.L = [](double, double x, double v) {
    const Domain d = symmetric(std::abs(x), true);
    if (!d.contains(v)) return ExtReal::infinity();
    if (x == 0.0) return ExtReal(0.0);
    return ExtReal(std::abs(v) / (std::abs(x) - std::abs(v)));
  };
  e.blc_holds = false;
  return e;
}

CatalogEntry make_abs() {
  CatalogEntry e;
  e.name = "ABS";
  e.description = "H = |p|, L = indicator of [-1,1]";
  auto& H = e.hamiltonian;
  H.name = "ABS";
  H.autonomous = true;
  H.H = [](double, double, double p) { return std::abs(p); };
  H.c = [](double) { return 1.0; };
  H.k = [](double, double) { return 0.0; };
  H.recession = [](double, double, double d) { return std::abs(d); };
  auto& L = e.lagrangian;
  L.name = "ABS";
  L.dom = [](double, double) { return Domain{-1.0, 1.0, false}; };
  L.L = [](double, double, double v) { return on_domain(Domain{-1.0, 1.0, false}, v, [](double) { return 0.0; }); };
  L.lambda = [](double, double) { return 0.0; };
  e.blc_holds = true;
  ExplicitTriple plain;
  plain.name = "ABS-identity";
  plain.control_set = ExplicitTriple::ControlSet::kInterval;
  plain.f = [](double, double, const std::vector<double>& a) { return a[0]; };
  plain.l = [](double, double, const std::vector<double>&) { return 0.0; };
  e.triples = {plain, abs_family_triple([](double x) { return x * x; }, [](double x) { return 1.0 + std::abs(x); })};
  return e;
}

}  // namespace

bool Domain::contains(double v) const {
  if (open && lo < hi) return v > lo && v < hi;
  return v >= lo - kSlack && v <= hi + kSlack;
}

double Domain::inner_lo() const { return open && lo < hi ? lo + std::ldexp(hi - lo, -40) : lo; }
double Domain::inner_hi() const { return open && lo < hi ? hi - std::ldexp(hi - lo, -40) : hi; }

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{make_ex1(), make_ex2(), make_ex4(), make_abs()};
  return entries;
}

const CatalogEntry& find_entry(std::string_view name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return e;
  }
  throw InputError(fmt::format("unknown example '{}'", name));
}

CatalogEntry time_scaled(const CatalogEntry& base) {
  CatalogEntry e = base;
  e.name = base.name + "-scaled";
  e.description = "(1+t) times " + base.description;
  const auto H0 = base.hamiltonian;
  const auto L0 = base.lagrangian;
  auto& H = e.hamiltonian;
  H.name = e.name;
  H.autonomous = false;
  H.H = [H0](double t, double x, double p) { return (1.0 + t) * H0.H(t, x, p); };
  H.c = [H0](double t) { return (1.0 + t) * H0.c(t); };
  H.k = [H0](double t, double R) { return (1.0 + t) * H0.k(t, R); };
  if (H0.recession) H.recession = [H0](double t, double x, double d) { return (1.0 + t) * H0.recession(t, x, d); };
  auto& L = e.lagrangian;
  L.name = e.name;
  L.dom = [L0](double t, double x) {
    Domain d = L0.dom(t, x);
    d.lo *= 1.0 + t;
    d.hi *= 1.0 + t;
    return d;
  };
  L.L = [L0](double t, double x, double v) { return (1.0 + t) * L0.L(t, x, v / (1.0 + t)); };
  if (L0.lambda) L.lambda = [L0](double t, double x) { return (1.0 + t) * L0.lambda(t, x); };
  for (auto& tr : e.triples) {
    const auto f0 = tr.f, l0 = tr.l;
    tr.name += "-scaled";
    tr.f = [f0](double t, double x, const std::vector<double>& a) { return (1.0 + t) * f0(t, x, a); };
    tr.l = [l0](double t, double x, const std::vector<double>& a) { return (1.0 + t) * l0(t, x, a); };
  }
  return e;
}

ExplicitTriple abs_family_triple(std::function<double(double)> i, std::function<double(double)> j) {
  ExplicitTriple tr;
  tr.name = "ABS-family";
  tr.control_set = ExplicitTriple::ControlSet::kInterval;
  tr.f = [i](double, double x, const std::vector<double>& a) {
    const double ix = i(x);
    return a[0] * (1.0 + std::abs(a[0]) * ix) / (1.0 + ix);
  };
  tr.l = [j](double, double x, const std::vector<double>& a) { return (1.0 - std::abs(a[0])) * j(x); };
  return tr;
}

namespace {

struct GridTable {
  std::vector<double> xs, ps;
  std::vector<std::vector<double>> h;  // h[ix][ip]

  // Piecewise-linear interpolation in p at x-node row, linear beyond the ends.
  double row(std::size_t ix, double p) const {
    const auto& r = h[ix];
    const std::size_t n = ps.size();
    std::size_t k;
    if (p <= ps.front()) {
      k = 0;
    } else if (p >= ps.back()) {
      k = n - 2;
    } else {
      k = static_cast<std::size_t>(std::upper_bound(ps.begin(), ps.end(), p) - ps.begin()) - 1;
      k = std::min(k, n - 2);
    }
    const double s = (r[k + 1] - r[k]) / (ps[k + 1] - ps[k]);
    return r[k] + s * (p - ps[k]);
  }
  double end_slope(std::size_t ix, bool right) const {
    const auto& r = h[ix];
    const std::size_t n = ps.size();
    return right ? (r[n - 1] - r[n - 2]) / (ps[n - 1] - ps[n - 2]) : (r[1] - r[0]) / (ps[1] - ps[0]);
  }
  // x-interval and weight, constant extrapolation beyond the ends.
  std::pair<std::size_t, double> locate(double x) const {
    if (xs.size() == 1 || x <= xs.front()) return {0, 0.0};
    if (x >= xs.back()) return {xs.size() - 2, 1.0};
    const std::size_t j = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    return {j, (x - xs[j]) / (xs[j + 1] - xs[j])};
  }
  double H(double x, double p) const {
    auto [j, s] = locate(x);
    if (xs.size() == 1) return row(0, p);
    return (1.0 - s) * row(j, p) + s * row(j + 1, p);
  }
  double slope(double x, bool right) const {
    auto [j, s] = locate(x);
    if (xs.size() == 1) return end_slope(0, right);
    return (1.0 - s) * end_slope(j, right) + s * end_slope(j + 1, right);
  }
  double L(double x, double v) const {
    double best = -kInf;
    for (double p : ps) best = std::max(best, v * p - H(x, p));
    return best;
  }
};

}  // namespace

CatalogEntry load_grid_model(const std::filesystem::path& path) {
  std::map<double, std::map<double, double>> data;
  for (const auto& row : io::read_csv_rows(path)) {
    if (!io::is_numeric_row(row)) {
      if (data.empty()) continue;
      throw InputError(fmt::format("non-numeric row in '{}'", path.string()));
    }
    if (row.size() != 3) throw InputError("model file rows are `x,p,H`");
    const double x = io::parse_double(row[0]), p = io::parse_double(row[1]), h = io::parse_double(row[2]);
    if (!std::isfinite(x) || !std::isfinite(p) || !std::isfinite(h)) throw InputError("model file values must be finite");
    if (!data[x].emplace(p, h).second) throw InputError("duplicate (x,p) node in model file");
  }
  if (data.empty()) throw InputError(fmt::format("no data rows in '{}'", path.string()));
  auto tab = std::make_shared<GridTable>();
  for (const auto& [x, row] : data) {
    tab->xs.push_back(x);
    std::vector<double> ps, hs;
    for (const auto& [p, h] : row) ps.push_back(p), hs.push_back(h);
    if (tab->ps.empty()) tab->ps = ps;
    if (ps != tab->ps) throw InputError("model file must be a full tensor grid in (x,p)");
    tab->h.push_back(hs);
  }
  if (tab->ps.size() < 2) throw InputError("model file needs at least two p nodes");
  for (std::size_t ix = 0; ix < tab->xs.size(); ++ix) {
    for (std::size_t k = 1; k + 1 < tab->ps.size(); ++k) {
      const auto& r = tab->h[ix];
      const double s0 = (r[k] - r[k - 1]) / (tab->ps[k] - tab->ps[k - 1]);
      const double s1 = (r[k + 1] - r[k]) / (tab->ps[k + 1] - tab->ps[k]);
      if (s1 < s0 - 1e-9 * (1.0 + std::abs(s0))) {
        throw InputError(fmt::format("model is not convex in p at x = {}", tab->xs[ix]));
      }
    }
  }
  double c = 0.0, k = 0.0;
  for (std::size_t ix = 0; ix < tab->xs.size(); ++ix) {
    const double s = std::max(std::abs(tab->end_slope(ix, false)), std::abs(tab->end_slope(ix, true)));
    c = std::max(c, s / (1.0 + std::abs(tab->xs[ix])));
    if (ix + 1 < tab->xs.size()) {
      const double dx = tab->xs[ix + 1] - tab->xs[ix];
      for (std::size_t ip = 0; ip < tab->ps.size(); ++ip) {
        k = std::max(k, std::abs(tab->h[ix + 1][ip] - tab->h[ix][ip]) / ((1.0 + std::abs(tab->ps[ip])) * dx));
      }
      for (bool right : {false, true}) {
        k = std::max(k, std::abs(tab->end_slope(ix + 1, right) - tab->end_slope(ix, right)) / dx);
      }
    }
  }

  CatalogEntry e;
  e.name = path.stem().string();
  e.description = fmt::format("grid model '{}' ({} x-nodes, {} p-nodes)", path.filename().string(), tab->xs.size(),
                              tab->ps.size());
  auto& H = e.hamiltonian;
  H.name = e.name;
  H.autonomous = true;
  H.H = [tab](double, double x, double p) { return tab->H(x, p); };
  H.c = [c](double) { return c; };
  H.k = [k](double, double) { return k; };
  H.recession = [tab](double, double x, double d) { return std::max(d * tab->slope(x, false), d * tab->slope(x, true)); };
  auto& L = e.lagrangian;
  L.name = e.name;
  L.provenance = Provenance::kGridConjugate;
  L.dom = [tab](double, double x) { return Domain{tab->slope(x, false), tab->slope(x, true), false}; };
  L.L = [tab](double, double x, double v) {
    const Domain d{tab->slope(x, false), tab->slope(x, true), false};
    if (!d.contains(v)) return ExtReal::infinity();
    return ExtReal(tab->L(x, std::clamp(v, d.lo, d.hi)));
  };
  L.lambda = [tab](double, double x) {
    return std::max(tab->L(x, tab->slope(x, false)), tab->L(x, tab->slope(x, true)));
  };
  e.blc_holds = true;
  return e;
}

SamplePlan SamplePlan::uniform(double T, int nt, double R, int nx, double P, int np) {
  SamplePlan s;
  s.t = nt == 1 ? std::vector<double>{0.0} : linspace(0.0, T, nt);
  s.x = linspace(-R, R, nx);
  s.p = linspace(-P, P, np);
  return s;
}

std::vector<CheckReport> check_H1_H4(const HamiltonianModel& H, const SamplePlan& plan, double tol) {
  CheckReport finite{"H1_finite"}, cont{"H2_continuity"}, conv{"H3_convexity"}, growth{"H4_growth"};
  finite.tolerance = 0.0;
  cont.tolerance = 0.0;
  conv.tolerance = tol;
  growth.tolerance = tol;
  constexpr double eps = 1e-7;
  for (double t : plan.t) {
    const double ct = H.c(t);
    for (double x : plan.x) {
      for (std::size_t i = 0; i < plan.p.size(); ++i) {
        const double p = plan.p[i];
        const double h = H.H(t, x, p);
        finite.observe(std::isfinite(h) ? 0.0 : kInf, {t, x, p});
        // Continuity surrogate: a 1e-7 step in (x,p) moves H by at most 1e-4.
        const double hn = H.H(t, x + eps, p + eps);
        cont.observe(std::abs(hn - h) - 1e-4, {t, x, p});
        for (std::size_t j = i + 1; j < plan.p.size(); ++j) {
          const double q = plan.p[j];
          const double hq = H.H(t, x, q);
          const double mid = H.H(t, x, 0.5 * (p + q));
          conv.observe((mid - 0.5 * (h + hq)) / (1.0 + std::abs(h) + std::abs(hq)), {t, x, p, q});
          growth.observe((std::abs(h - hq) - ct * (1.0 + std::abs(x)) * std::abs(p - q)) / (1.0 + std::abs(h)),
                         {t, x, p, q});
        }
      }
    }
  }
  std::vector<CheckReport> out{finite, cont, conv, growth};
  for (auto& r : out) r.finish();
  return out;
}

CheckReport check_HLC(const HamiltonianModel& H, double R, double k, const SamplePlan& plan) {
  CheckReport rep{"HLC"};
  rep.tolerance = 0.0;
  double worst_ratio = 0.0;
  std::vector<double> xs;
  for (double x : plan.x) {
    if (std::abs(x) <= R) xs.push_back(x);
  }
  for (double t : plan.t) {
    const double kt = k;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        const double dx = std::abs(xs[i] - xs[j]);
        if (dx == 0.0) continue;
        for (double p : plan.p) {
          const double ratio = std::abs(H.H(t, xs[i], p) - H.H(t, xs[j], p)) / ((1.0 + std::abs(p)) * dx);
          worst_ratio = std::max(worst_ratio, ratio);
          rep.observe(ratio - kt * (1.0 + 1e-9), {t, xs[i], xs[j], p});
        }
        if (H.recession) {
          for (double d : {-1.0, 1.0}) {
            const double ratio = std::abs(H.recession(t, xs[i], d) - H.recession(t, xs[j], d)) / dx;
            worst_ratio = std::max(worst_ratio, ratio);
            rep.observe(ratio - kt * (1.0 + 1e-9), {t, xs[i], xs[j], d * kInf});
          }
        }
      }
    }
  }
  rep.empirical_constant = worst_ratio;
  rep.finish();
  return rep;
}

namespace {

// min of the convex map L(t,y,.) over [a,b] by golden section, endpoints
// included.
double min_on_interval(const LagrangianModel& L, double t, double y, double a, double b) {
  auto f = [&](double u) { return L.L(t, y, u).raw(); };
  double best = std::min(f(a), f(b));
  if (b - a <= 0.0) return best;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = a, hi = b;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 60 && hi - lo > 1e-13 * (1.0 + std::abs(lo)); ++it) {
    if (fc <= fd) {
      hi = d, d = c, fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c, c = d, fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  return std::min({best, fc, fd});
}

struct LlcSample {
  double t, x, y, v, Lxv;
};

// Worst slack of the LLC (s = 0) or ELC (s > 0) inequality at modulus k.
void llc_slack(const LagrangianModel& L, const std::vector<LlcSample>& samples, double k,
               const std::vector<double>& shifts, CheckReport& rep) {
  std::vector<double> worst(samples.size(), -kInf);
  std::vector<double> worst_s(samples.size(), 0.0);
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& s = samples[i];
    const double delta = std::abs(s.x - s.y);
    const Domain dy = L.dom(s.t, s.y);
    const double r = k * delta;
    double a = std::max(s.v - r, dy.inner_lo()), b = std::min(s.v + r, dy.inner_hi());
    double m;
    if (a > b) {
      // Touching intervals within rounding still count as feasible.
      if (a - b <= 1e-12 * (1.0 + std::abs(s.v))) {
        m = L.L(s.t, s.y, std::clamp(s.v, dy.inner_lo(), dy.inner_hi())).raw();
      } else {
        m = kInf;
      }
    } else {
      m = min_on_interval(L, s.t, s.y, a, b);
    }
    for (double sh : shifts) {
      const double slack = m - (s.Lxv + sh) - r;
      if (slack > worst[i]) worst[i] = slack, worst_s[i] = sh;
    }
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    rep.observe(worst[i], {s.t, s.x, s.y, s.v, worst_s[i]});
  }
}

}  // namespace

LlcElcReport check_LLC_ELC(const LagrangianModel& L, double R, double k, const SamplePlan& plan, int nv, double tol) {
  std::vector<double> xs;
  for (double x : plan.x) {
    if (std::abs(x) <= R) xs.push_back(x);
  }
  std::vector<LlcSample> samples;
  for (double t : plan.t) {
    for (double x : xs) {
      const Domain dx = L.dom(t, x);
      for (double v : domain_samples(dx, nv)) {
        const ExtReal lv = L.L(t, x, v);
        if (lv.is_infinite()) continue;
        for (double y : xs) {
          if (y != x) samples.push_back({t, x, y, v, lv.value()});
        }
      }
    }
  }
  const std::vector<double> llc_shift{0.0}, elc_shift{0.0, 0.5, 2.0};
  auto run = [&](double kk, const std::vector<double>& sh, const char* name) {
    CheckReport r{name};
    r.tolerance = tol;
    llc_slack(L, samples, kk, sh, r);
    r.finish();
    return r;
  };
  auto empirical = [&](const std::vector<double>& sh) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 40 && !run(hi, sh, "probe").pass; ++i) lo = hi, hi *= 2.0;
    if (run(0.0, sh, "probe").pass) return 0.0;
    for (int i = 0; i < 30; ++i) {
      const double mid = 0.5 * (lo + hi);
      (run(mid, sh, "probe").pass ? hi : lo) = mid;
    }
    return hi;
  };
  LlcElcReport out{run(k, llc_shift, "LLC"), run(k, elc_shift, "ELC")};
  out.llc.empirical_constant = empirical(llc_shift);
  out.elc.empirical_constant = empirical(elc_shift);
  return out;
}

CheckReport check_BLC(const LagrangianModel& L, const SamplePlan& plan, const BlcOptions& opt) {
  CheckReport rep{"BLC"};
  if (opt.use_lambda && L.has_lambda()) {
    rep.tolerance = 1e-12;
    double lip = 0.0;
    for (double t : plan.t) {
      for (std::size_t i = 0; i < plan.x.size(); ++i) {
        const double x = plan.x[i];
        const double lam = L.lambda(t, x);
        for (double v : domain_samples(L.dom(t, x), 33)) {
          const ExtReal lv = L.L(t, x, v);
          rep.observe(lv.is_finite() ? (lv.value() - lam) / (1.0 + std::abs(lam)) : -kInf, {t, x, v});
        }
        if (i + 1 < plan.x.size() && plan.x[i + 1] != x) {
          lip = std::max(lip, std::abs(L.lambda(t, plan.x[i + 1]) - lam) / std::abs(plan.x[i + 1] - x));
        }
      }
    }
    rep.empirical_constant = lip;
    rep.finish();
    rep.status = rep.pass ? "BOUNDED" : "LAMBDA_EXCEEDED";
    return rep;
  }
  // Boundary filtration.
  rep.tolerance = 0.0;
  bool unbounded = false;
  double largest = -kInf;
  for (double t : plan.t) {
    for (double x : plan.x) {
      const Domain d = L.dom(t, x);
      if (d.is_singleton()) continue;
      const double mid = 0.5 * (d.lo + d.hi), half = 0.5 * (d.hi - d.lo);
      std::vector<double> est;
      for (int k = 1; k <= opt.filtration_steps; ++k) {
        const double s = 1.0 - std::pow(10.0, -k);
        const double a = L.L(t, x, mid + s * half).raw(), b = L.L(t, x, mid - s * half).raw();
        est.push_back(std::max(a, b));
      }
      bool increasing = true;
      for (std::size_t i = 1; i < est.size(); ++i) increasing = increasing && est[i] > est[i - 1];
      const bool here = increasing && est.back() > opt.threshold;
      unbounded = unbounded || here;
      largest = std::max(largest, est.back());
      rep.observe(here ? est.back() - opt.threshold : std::min(0.0, est.back() - opt.threshold), {t, x, est.back()});
    }
  }
  rep.empirical_constant = largest;
  rep.pass = !unbounded;
  rep.status = unbounded ? "UNBOUNDED" : "BOUNDED";
  return rep;
}

}  // namespace hamrep::models
