// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "cli/app.hpp"
#include "hamrep/bolza.hpp"
#include "hamrep/conjugate.hpp"
#include "hamrep/convex_geometry.hpp"
#include "hamrep/epigraph.hpp"
#include "hamrep/models.hpp"
#include "hamrep/representation.hpp"
#include "hamrep/stability.hpp"
#include "oracles.hpp"

using namespace hamrep;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<Point> to_points(const std::vector<oracle::P2>& v) {
  std::vector<Point> out;
  for (const auto& p : v) out.push_back(Point{p[0], p[1]});
  return out;
}

const representation::Representation& rep_of(const std::string& name) {
  static std::map<std::string, representation::Representation> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const auto& e = models::find_entry(name);
    it = cache.emplace(name, representation::Representation(e.hamiltonian, e.lagrangian)).first;
  }
  return it->second;
}

Outcome conjugacy_regression() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"EX1", "EX2"}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& e = models::find_entry(name);
    double err = 0.0;
    for (double x : {-1.5, -0.5, 0.5, 1.0, 1.5}) {
      const auto g = conjugate::GridFunction::sample(conjugate::Grid(conjugate::Axis::with_step(-40.0, 40.0, 1e-3)),
                                                     [&](const Point& p) { return e.hamiltonian.H(0.0, x, p[0]); });
      const double bound = e.hamiltonian.c(0.0) * (1.0 + std::abs(x));
      const auto Ls = conjugate::conjugate_grid(g, conjugate::Grid(conjugate::padded_slope_axis(bound, 1e-3)));
      const models::Domain d = e.lagrangian.dom(0.0, x);
      const double lo = d.lo + 0.1 * d.width(), hi = d.hi - 0.1 * d.width();
      for (std::size_t j = 0; j < Ls.values.size(); ++j) {
        const double v = Ls.grid.node(j)[0];
        if (v < lo || v > hi) continue;
        err = std::max(err, std::abs(Ls.values[j].value() - e.lagrangian.L(0.0, x, v).value()));
      }
    }
    const double secs = seconds_since(t0);
    pass = pass && err <= 5e-3 && secs < 5.0;
    detail += fmt::format("{}: max_err={:.3g} time={:.2f}s  ", name, err, secs);
  }
  return {pass, detail};
}

Outcome steiner_correctness() {
  using namespace geometry;
  const auto t0 = std::chrono::steady_clock::now();
  const auto Q = SphereQuadrature::default_for(2);
  double disc_excess = -1.0;
  for (int n : {8, 33, 128, 720}) {
    const double cx = 0.3, cy = -0.7, r = 1.7;
    std::vector<Point> pts;
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * std::numbers::pi * (k + 0.37) / n;
      pts.push_back(Point{cx + r * std::cos(th), cy + r * std::sin(th)});
    }
    const auto s = steiner_point(ConvexBody::hull(pts), Q);
    const double hull_err = r * (1.0 - std::cos(std::numbers::pi / n));
    disc_excess = std::max(disc_excess, std::hypot(s[0] - cx, s[1] - cy) - (1e-6 + hull_err));
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(-4, 4);
  double steiner_ratio = 0.0, p_ratio = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto K = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 40, 2.0)));
    const auto D = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 23, 2.0)));
    const double h = hausdorff(K, D);
    steiner_ratio = std::max(steiner_ratio, distance(steiner_point(K, Q), steiner_point(D, Q)) / (2.0 * h));
    const Point x{U(rng), U(rng)}, y{U(rng), U(rng)};
    p_ratio = std::max(p_ratio, hausdorff(ball_intersect_P(x, K), ball_intersect_P(y, D)) / (5.0 * (h + distance(x, y))));
  }
  const double secs = seconds_since(t0);
  const bool pass = disc_excess <= 0.0 && steiner_ratio <= 1.0 + 1e-6 && p_ratio <= 1.0 + 1e-6 && secs < 10.0;
  return {pass, fmt::format("disc_excess={:.3g} steiner_lip_ratio={:.4f} P_lip_ratio={:.4f} time={:.2f}s", disc_excess,
                            steiner_ratio, p_ratio, secs)};
}

Outcome representation_sandwich() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cloud = representation::control_cloud(1000, 3);
  bool pass = true;
  std::string detail;
  for (const char* name : {"EX1", "EX2"}) {
    const auto& rep = rep_of(name);
    double slack = 0.0, recovery = 0.0;
    bool ok = true;
    for (double t : linspace(0, 1, 5)) {
      for (double x : linspace(-2, 2, 9)) {
        const auto s = representation::verify_sandwich(rep.at(t, x), cloud, 1e-6, 1e-6);
        ok = ok && s.upper.pass && s.lower.pass;
        slack = std::max(slack, s.upper.worst_violation);
        recovery = std::max(recovery, s.lower.worst_violation);
      }
    }
    pass = pass && ok;
    detail += fmt::format("{}: worst_neg_slack={:.3g} worst_recovery={:.3g}  ", name, slack, recovery);
  }
  const double secs = seconds_since(t0);
  pass = pass && secs < 60.0;
  return {pass, detail + fmt::format("time={:.1f}s", secs)};
}

Outcome sup_formula() {
  const auto cloud = representation::control_cloud(20000, 1);
  const auto ps = linspace(-3, 3, 11);
  bool in_range = true, nonincreasing = true, strict = true;
  std::string detail;
  for (const char* name : {"EX1", "EX2"}) {
    const auto& rep = rep_of(name);
    const auto& H = rep.hamiltonian();
    double lo = HUGE_VAL, hi = -HUGE_VAL, sum1 = 0.0, sum2 = 0.0;
    for (double t : linspace(0, 1, 5)) {
      for (double x : linspace(-2, 2, 9)) {
        const auto loc = rep.at(t, x);
        const auto ec = loc.evaluate(cloud);
        const auto eg = loc.evaluate(loc.graph_controls());
        std::vector<Point> c1(ec.begin(), ec.begin() + 10000), c2 = ec;
        std::vector<Point> a = c1, b = c2;
        a.insert(a.end(), eg.begin(), eg.end());
        b.insert(b.end(), eg.begin(), eg.end());
        const auto ra = representation::sup_residuals(H, t, x, ps, a, 1e-9, 5e-2);
        const auto rb = representation::sup_residuals(H, t, x, ps, b, 1e-9, 5e-2);
        const auto qa = representation::sup_residuals(H, t, x, ps, c1);
        const auto qb = representation::sup_residuals(H, t, x, ps, c2);
        in_range = in_range && ra.report.pass;
        for (std::size_t k = 0; k < ps.size(); ++k) {
          lo = std::min(lo, ra.residuals[k]);
          hi = std::max(hi, ra.residuals[k]);
          nonincreasing = nonincreasing && rb.residuals[k] <= ra.residuals[k];
          sum1 += qa.residuals[k];
          sum2 += qb.residuals[k];
        }
      }
    }
    strict = strict && sum2 < sum1;
    detail += fmt::format("{}: residual in [{:.3g}, {:.3g}] cloud_sum {:.6g} -> {:.6g}  ", name, lo, hi, sum1, sum2);
  }
  return {in_range && nonincreasing && strict,
          detail + fmt::format("nonincreasing={} cloud_strict={}", nonincreasing, strict)};
}

Outcome lipschitz_audits() {
  bool pass = true;
  std::string detail;
  for (const char* name : {"EX1", "EX2"}) {
    representation::PairPlan plan;
    plan.pairs = 10000;
    plan.times = {0.0, 0.5, 1.0};
    const auto r = representation::audit_lipschitz_A1(rep_of(name), 1.0, plan);
    pass = pass && r.a1_f.pass && r.a1_l.pass && r.a2.pass;
    detail += fmt::format("{}: A1 f={:.3g} l={:.3g} bound={:.4g} A2 worst={:.3g}  ", name, *r.a1_f.empirical_constant,
                          *r.a1_l.empirical_constant, r.bound, r.a2.worst_violation);
  }
  return {pass, detail};
}

Outcome equivalence_coherence() {
  const auto plan = models::SamplePlan::uniform(1.0, 3, 2.0, 9, 6.0, 13);
  bool pass = true;
  std::string detail;
  for (const char* name : {"EX1", "EX2"}) {
    const auto& e = models::find_entry(name);
    const double khat = *models::check_HLC(e.hamiltonian, 2.0, 1.0, plan).empirical_constant;
    int agree = 0;
    for (double f : {0.5, 1.0, 1.5}) {
      const bool h = models::check_HLC(e.hamiltonian, 2.0, f * khat, plan).pass;
      const auto l = models::check_LLC_ELC(e.lagrangian, 2.0, f * khat, plan, 7);
      agree += (h == l.llc.pass && h == l.elc.pass) ? 1 : 0;
    }
    double excess = -HUGE_VAL;
    const double k = e.hamiltonian.k(0.0, 1.0);
    for (double x : linspace(-1, 1, 9)) {
      for (double y : linspace(-1, 1, 9)) {
        const epigraph::EpigraphSection A(e.lagrangian, 0, x, 2, 5, 40), B(e.lagrangian, 0, y, 2, 5, 40);
        excess = std::max(excess, epigraph::truncated_hausdorff(A, B) - 2.0 * k * std::abs(x - y) - 1e-2);
      }
    }
    pass = pass && agree == 3 && excess <= 0.0;
    detail += fmt::format("{}: k_hat={:.4g} agree={}/3 hausdorff_excess={:.3g}  ", name, khat, agree, excess);
  }
  return {pass, detail};
}

Outcome blc_negative() {
  const auto plan = models::SamplePlan::uniform(1.0, 11, 2.0, 17, 4.0, 17);
  const auto ex4 = models::check_BLC(models::find_entry("EX4").lagrangian, plan);
  bool pass = !ex4.pass && ex4.status == "UNBOUNDED" && ex4.empirical_constant && *ex4.empirical_constant > 1e6;
  std::string detail = fmt::format("EX4: status={} estimate={:.3g}  ", ex4.status, ex4.empirical_constant.value_or(0));
  for (const char* name : {"EX1", "EX2"}) {
    const auto r = models::check_BLC(models::find_entry(name).lagrangian, plan, models::BlcOptions{.use_lambda = false});
    pass = pass && r.pass;
    detail += fmt::format("{}: {}  ", name, r.status);
  }
  const auto dir = std::filesystem::temp_directory_path() / "hamrep_acceptance_c7";
  const int rc = cli::run({"hamrep", "--quiet", "represent", "--example", "EX4", "--out", dir.string()});
  std::ifstream in(dir / "audit.json");
  std::stringstream ss;
  ss << in.rdbuf();
  pass = pass && rc == 2 && ss.str().find("\"BLC_VIOLATED\"") != std::string::npos;
  std::filesystem::remove_all(dir);
  return {pass, detail + fmt::format("cli_exit={}", rc)};
}

Outcome stability_shift() {
  const auto& ex = models::find_entry("EX2");
  const stability::PerturbationFamily fam{ex, stability::Rule::kShift, 1.0, stability::full_schedule(64)};
  std::vector<stability::BasePoint> pts;
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (const auto& a : representation::control_cloud(16, 1)) pts.push_back({0.0, x, a});
  }
  const auto r = stability::stability_audit_e(fam, pts);

  stability::SetSequenceProbe probe;
  probe.target = epigraph::EpigraphSection(ex.lagrangian, 0, 0, 2, 5, 30).to_body();
  for (int i : {1, 2, 4, 8, 16, 32, 64, 128}) {
    probe.bodies.push_back(epigraph::EpigraphSection(ex.lagrangian, 0, 1.0 / i, 2, 5, 30).to_body());
  }
  for (double v = -3; v <= 3; v += 0.5) {
    for (double eta = -3; eta <= 10; eta += 1.0) probe.probes.push_back(Point{v, eta});
  }
  const auto lim = stability::set_limit_check(probe);
  const double last = r.deviations.back();
  const bool pass = r.r_squared >= 0.9 && last <= 1e-2 && lim.report.pass;
  return {pass, fmt::format("C={:.4f} R2={:.4f} final_deviation={:.4g} (tol 1e-2) set_limit={} ({:.3g})",
                            r.rate_constant, r.r_squared, last, lim.report.pass ? "pass" : "fail",
                            lim.deviations.back())};
}

Outcome bolza_reduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& ex = models::find_entry("EX2");
  const auto& rep = rep_of("EX2");
  double gaps[2];
  bool within = true, lower_ok = true;
  std::string detail;
  for (int r = 0; r < 2; ++r) {
    bolza::BolzaSpec s;
    s.cost = bolza::EndpointCost::terminal(0.0, [](double) { return ExtReal(0.0); });
    s.Nt = 50 << r;
    s.Nx = (200 << r) + 1;
    const auto g = bolza::solve_variational(s, ex.hamiltonian, ex.lagrangian);
    const auto l = bolza::solve_control(s, rep);
    gaps[r] = std::abs(g.value.value() - l.value.value());
    const double tol = 3.0 * (g.h_t + g.h_x) + g.sample_gap;
    const double lb = bolza::lower_bound(s, ex.hamiltonian);
    within = within && gaps[r] <= tol;
    lower_ok = lower_ok && g.value.value() >= lb && l.value.value() >= lb;
    if (r == 0) {
      detail = fmt::format("minG={:.6g} minL={:.6g} gap={:.3g} tol={:.4g} lower_bound={:.4g}", g.value.value(),
                           l.value.value(), gaps[0], tol, lb);
    }
  }
  const bool shrinks = gaps[1] <= 1e-12 || gaps[0] / gaps[1] >= 1.5;
  const double secs = seconds_since(t0);
  return {within && lower_ok && shrinks && secs < 120.0,
          detail + fmt::format(" refined_gap={:.3g} shrinks={} time={:.1f}s", gaps[1], shrinks, secs)};
}

Outcome value_agreement() {
  const auto& ex = models::find_entry("EX2");
  bolza::BolzaSpec s;
  s.cost = bolza::EndpointCost::terminal(0.0, [](double x) { return ExtReal(std::abs(x)); });
  s.M = 1.0;
  s.Nt = 50;
  s.Nx = 201;
  const auto Vv = bolza::value_function(s, ex.hamiltonian, ex.lagrangian);
  const auto Vc = bolza::value_function(s, rep_of("EX2"));
  const double tol = 3.0 * ((Vv.t[1] - Vv.t[0]) + (Vv.x[1] - Vv.x[0]));
  double worst = 0.0;
  bool pattern = true;
  for (std::size_t i = 0; i < Vv.V.size(); ++i) {
    if (Vv.V[i].is_finite() != Vc.V[i].is_finite()) {
      pattern = false;
    } else if (Vv.V[i].is_finite()) {
      worst = std::max(worst, std::abs(Vv.V[i].value() - Vc.V[i].value()));
    }
  }
  bool exact = true;
  const std::size_t K = Vv.t.size() - 1;
  for (std::size_t j = 0; j < Vv.x.size(); ++j) {
    exact = exact && Vv.at(K, j).raw() == std::abs(Vv.x[j]) && Vc.at(K, j).raw() == std::abs(Vc.x[j]);
  }
  return {pattern && worst <= tol && exact,
          fmt::format("max_diff={:.3g} tol={:.4g} same_domain={} terminal_exact={}", worst, tol, pattern, exact)};
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  if (!std::filesystem::exists(dir)) return out;
  for (const auto& f : std::filesystem::recursive_directory_iterator(dir)) {
    if (!f.is_regular_file()) continue;
    std::ifstream in(f.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[std::filesystem::relative(f.path(), dir).string()] = ss.str();
  }
  return out;
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"catalog"},
      {"represent", "--example", "EX2", "--seed", "7"},
      {"represent", "--example", "EX4"},
      {"verify", "--example", "EX1"},
      {"stability", "--example", "EX2", "--rule", "shift", "--imax", "16"},
      {"bolza", "--example", "EX2", "--Nt", "50", "--Nx", "201"},
  };
  const auto root = std::filesystem::temp_directory_path() / "hamrep_acceptance_c11";
  std::filesystem::remove_all(root);
  bool pass = true;
  std::size_t files = 0;
  std::string failed;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::map<std::string, std::string> trees[2];
    int rcs[2];
    for (int run = 0; run < 2; ++run) {
      const auto dir = root / fmt::format("c{}_{}", c, run);
      std::vector<std::string> args{"hamrep", "--quiet"};
      args.insert(args.end(), commands[c].begin(), commands[c].end());
      args.insert(args.end(), {"--out", dir.string()});
      rcs[run] = cli::run(args);
      trees[run] = read_tree(dir);
    }
    const bool same = rcs[0] == rcs[1] && !trees[0].empty() && trees[0] == trees[1];
    files += trees[0].size();
    if (!same) failed += " " + commands[c].front();
    pass = pass && same;
  }
  std::filesystem::remove_all(root);
  return {pass, fmt::format("{} commands, {} files compared{}", commands.size(), files,
                            failed.empty() ? "" : ", differing:" + failed)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"conjugacy regression", conjugacy_regression},
      {"Steiner correctness", steiner_correctness},
      {"representation sandwich", representation_sandwich},
      {"sup formula", sup_formula},
      {"Lipschitz audits", lipschitz_audits},
      {"equivalence coherence", equivalence_coherence},
      {"necessary condition negative test", blc_negative},
      {"stability", stability_shift},
      {"Bolza reduction", bolza_reduction},
      {"value function agreement", value_agreement},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("criterion {:>2} {:<34} {}  {}\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
