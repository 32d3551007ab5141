#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "cli/app.hpp"
#include "hamrep/bolza.hpp"
#include "hamrep/error.hpp"
#include "hamrep/io.hpp"
#include "hamrep/stability.hpp"

namespace hamrep::cli {

namespace {

using json = nlohmann::ordered_json;

template <class... A>
void say(const RunConfig& cfg, fmt::format_string<A...> f, A&&... args) {
  if (!cfg.quiet) fmt::print(f, std::forward<A>(args)...);
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return io::format_double(v);
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double d : v) a.push_back(number(d));
  return a;
}

json to_json(const CheckReport& r) {
  json j;
  j["condition"] = r.condition;
  j["pass"] = r.pass;
  j["worst_violation"] = number(r.worst_violation);
  j["tolerance"] = number(r.tolerance);
  j["samples"] = r.samples;
  j["arg_worst"] = numbers(r.arg_worst);
  j["empirical_constant"] = r.empirical_constant ? number(*r.empirical_constant) : json(nullptr);
  j["status"] = r.status;
  return j;
}

json header(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["example"] = cfg.model_file.empty() ? cfg.example : cfg.model_file;
  j["seed"] = cfg.seed;
  return j;
}

void write_json(const RunConfig& cfg, const std::string& name, const json& j) {
  std::filesystem::create_directories(cfg.out);
  io::write_file_atomic(cfg.out / name, j.dump(2) + "\n");
}

models::CatalogEntry load_entry(const RunConfig& cfg) {
  if (!cfg.model_file.empty()) return models::load_grid_model(cfg.model_file);
  return models::find_entry(cfg.example);
}

std::vector<double> linspace(double a, double b, int n) {
  if (n == 1) return {a};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  v.back() = b;
  return v;
}

// Folds r into `into`, keeping the worst sample and the conjunction of passes.
void merge(CheckReport& into, const CheckReport& r) {
  if (into.samples == 0 && into.condition.empty()) {
    into = r;
    return;
  }
  const std::size_t n = into.samples + r.samples;
  if (r.worst_violation > into.worst_violation) {
    into.worst_violation = r.worst_violation;
    into.arg_worst = r.arg_worst;
  }
  into.samples = n;
  into.pass = into.pass && r.pass;
  if (r.empirical_constant) {
    into.empirical_constant = into.empirical_constant ? std::max(*into.empirical_constant, *r.empirical_constant)
                                                      : *r.empirical_constant;
  }
}

CheckReport blc_report(const models::CatalogEntry& e) {
  const auto plan = models::SamplePlan::uniform(e.hamiltonian.T, 3, 2.0, 17, 4.0, 17);
  return models::check_BLC(e.lagrangian, plan);
}

int blc_violated(const RunConfig& cfg, const std::string& file, const CheckReport& blc) {
  json j = header(cfg);
  j["status"] = "BLC_VIOLATED";
  j["reason"] = "BLC_VIOLATED";
  j["checks"] = json::array({to_json(blc)});
  write_json(cfg, file, j);
  say(cfg, "BLC_VIOLATED: {} ({})\n", blc.status, io::format_double(blc.empirical_constant.value_or(0.0)));
  return kConditionViolated;
}

ExtReal terminal_g(const std::string& name, double x) {
  if (name == "zero") return 0.0;
  if (name == "abs") return std::abs(x);
  if (name == "square") return x * x;
  throw InputError(fmt::format("unknown terminal cost '{}'", name));
}

}  // namespace

int cmd_represent(const RunConfig& cfg) {
  const auto entry = load_entry(cfg);
  const auto& H = entry.hamiltonian;
  const CheckReport blc = blc_report(entry);
  if (!blc.pass || !entry.lagrangian.has_lambda()) return blc_violated(cfg, "audit.json", blc);
  const representation::Representation rep(H, entry.lagrangian);

  const auto ts = linspace(0.0, H.T, cfg.mesh_t);
  const auto xs = linspace(-1.0, 1.0, cfg.mesh_x);
  const auto ps = linspace(-3.0, 3.0, 11);
  const auto cloud = representation::control_cloud(cfg.controls, cfg.seed);
  const std::span<const Point> trace_cloud(cloud.data(), std::min(cfg.trace_controls, cloud.size()));

  CheckReport sup("sup_formula"), upper("sandwich_upper"), lower("sandwich_lower"), range("sandwich_range");
  std::vector<representation::ConstructionTrace> traces;
  for (double t : ts) {
    for (double x : xs) {
      const auto loc = rep.at(t, x);
      for (const Point& a : trace_cloud) traces.push_back(loc.trace(a));
      merge(sup, representation::verify_sup_formula(loc, ps, cloud, cfg.tol_sup_low, cfg.tol_sup_high).report);
      const auto s = representation::verify_sandwich(loc, cloud, cfg.tol_member, cfg.tol_graph);
      merge(upper, s.upper);
      merge(lower, s.lower);
      merge(range, s.range);
    }
  }
  representation::PairPlan plan;
  plan.pairs = cfg.pairs;
  plan.seed = cfg.seed;
  plan.times = ts;
  const auto lip = representation::audit_lipschitz_A1(rep, cfg.R, plan);

  const std::vector<CheckReport> checks{blc, sup, upper, lower, range, lip.a1_f, lip.a1_l, lip.intermediate, lip.a2};
  const bool pass = std::all_of(checks.begin(), checks.end(), [](const CheckReport& r) { return r.pass; });
  std::filesystem::create_directories(cfg.out);
  representation::write_traces_csv(cfg.out / "representation_trace.csv", traces);
  json j = header(cfg);
  j["status"] = pass ? "PASS" : "FAIL";
  j["a1_bound"] = number(lip.bound);
  j["checks"] = json::array();
  for (const auto& r : checks) j["checks"].push_back(to_json(r));
  write_json(cfg, "audit.json", j);
  for (const auto& r : checks) {
    say(cfg, "{:<16} {} worst={}\n", r.condition, r.pass ? "PASS" : "FAIL", io::format_double(r.worst_violation));
  }
  return pass ? kPass : kAuditFailed;
}

int cmd_verify(const RunConfig& cfg) {
  const auto entry = load_entry(cfg);
  const auto& H = entry.hamiltonian;
  const auto plan = models::SamplePlan::uniform(H.T, 3, cfg.R, 9, 3.0, 13);
  double k = 0.0;
  for (double t : plan.t) k = std::max(k, H.k(t, cfg.R));
  const bool all = cfg.check == "all";
  std::vector<CheckReport> checks;
  if (all || cfg.check == "H1-H4") {
    for (auto& r : models::check_H1_H4(H, plan)) checks.push_back(std::move(r));
  }
  if (all || cfg.check == "HLC") checks.push_back(models::check_HLC(H, cfg.R, k, plan));
  if (all || cfg.check == "LLC_ELC") {
    auto r = models::check_LLC_ELC(entry.lagrangian, cfg.R, k, plan);
    checks.push_back(std::move(r.llc));
    checks.push_back(std::move(r.elc));
  }
  if (all || cfg.check == "BLC") checks.push_back(models::check_BLC(entry.lagrangian, plan));

  const auto failing = std::find_if(checks.begin(), checks.end(), [](const CheckReport& r) { return !r.pass; });
  json j = header(cfg);
  j["status"] = failing == checks.end() ? "PASS" : "CONDITION_VIOLATED";
  j["first_failure"] = failing == checks.end() ? json(nullptr) : json(failing->condition);
  j["R"] = number(cfg.R);
  j["k_R"] = number(k);
  j["checks"] = json::array();
  for (const auto& r : checks) j["checks"].push_back(to_json(r));
  write_json(cfg, "verify.json", j);
  for (const auto& r : checks) {
    say(cfg, "{:<16} {} constant={}\n", r.condition, r.pass ? "PASS" : "FAIL",
               r.empirical_constant ? io::format_double(*r.empirical_constant) : std::string("-"));
  }
  return failing == checks.end() ? kPass : kConditionViolated;
}

int cmd_stability(const RunConfig& cfg) {
  const auto entry = load_entry(cfg);
  const auto& H = entry.hamiltonian;
  const auto& L = entry.lagrangian;
  const CheckReport blc = blc_report(entry);
  if (!blc.pass || !L.has_lambda()) return blc_violated(cfg, "stability.json", blc);

  const stability::PerturbationFamily fam{entry, stability::parse_rule(cfg.rule), cfg.rho,
                                          stability::full_schedule(cfg.imax)};
  std::vector<stability::BasePoint> points;
  const auto cloud = representation::control_cloud(16, cfg.seed);
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (const auto& a : cloud) points.push_back({0.0, x, a});
  }
  const auto st = stability::stability_audit_e(fam, points, {}, cfg.tol_stability);

  // E_L(0, 1/i) against E_L(0, 0) with a shared cap.
  const double reach = representation::omega(H, L, 0.0, 0.0) + 1.0;
  const double growth = 2.0 * H.c(0.0);
  const double cap = epigraph::default_cap(reach);
  stability::SetSequenceProbe probe;
  probe.target = epigraph::EpigraphSection(L, 0.0, 0.0, growth, reach, cap).to_body();
  std::vector<int> limit_idx;
  for (int i = 1; i <= 2 * cfg.imax; i *= 2) limit_idx.push_back(i);
  for (int i : limit_idx) {
    probe.bodies.push_back(epigraph::EpigraphSection(L, 0.0, 1.0 / i, growth, reach, cap).to_body());
  }
  for (double v : linspace(-reach, reach, 13)) {
    for (double eta : linspace(-reach, 2.0 * reach, 14)) probe.probes.push_back(Point{v, eta});
  }
  const auto lim = stability::set_limit_check(probe, cfg.tol_limit);

  std::string csv = "i,deviation,chain_ratio\n";
  for (std::size_t k = 0; k < st.indices.size(); ++k) {
    csv += fmt::format("{},{},{}\n", st.indices[k], io::format_double(st.deviations[k]),
                       io::format_double(st.chain_ratio[k]));
  }
  std::filesystem::create_directories(cfg.out);
  io::write_file_atomic(cfg.out / "stability_rates.csv", csv);

  const bool pass = st.report.pass && lim.report.pass;
  json j = header(cfg);
  j["status"] = pass ? "PASS" : "FAIL";
  j["rule"] = std::string(stability::rule_name(fam.rule));
  j["rho"] = number(cfg.rho);
  j["imax"] = cfg.imax;
  j["rate_constant"] = number(st.rate_constant);
  j["r_squared"] = number(st.r_squared);
  j["final_deviation"] = number(st.deviations.back());
  j["set_limit_indices"] = limit_idx;
  j["set_limit_deviations"] = numbers(lim.deviations);
  j["checks"] = json::array({to_json(st.report), to_json(lim.report)});
  write_json(cfg, "stability.json", j);
  say(cfg, "rule={} C={} R2={} final={} {}\n", stability::rule_name(fam.rule), io::format_double(st.rate_constant),
             io::format_double(st.r_squared), io::format_double(st.deviations.back()), st.report.pass ? "PASS" : "FAIL");
  say(cfg, "set_limit final={} {}\n", io::format_double(lim.deviations.back()), lim.report.pass ? "PASS" : "FAIL");
  return pass ? kPass : kAuditFailed;
}

int cmd_bolza(const RunConfig& cfg) {
  const auto entry = load_entry(cfg);
  const auto& H = entry.hamiltonian;
  const auto& L = entry.lagrangian;
  terminal_g(cfg.g, 0.0);
  const CheckReport blc = blc_report(entry);
  if (!blc.pass || !L.has_lambda()) return blc_violated(cfg, "bolza.json", blc);
  const representation::Representation rep(H, L);

  bolza::BolzaSpec spec;
  const std::string gname = cfg.g;
  spec.cost = bolza::EndpointCost::terminal(cfg.x0, [gname](double x) { return terminal_g(gname, x); });
  spec.M = std::max(cfg.M, std::abs(cfg.x0));
  spec.T = H.T;
  spec.Nt = cfg.Nt;
  spec.Nx = cfg.Nx;
  spec.cloud = cfg.cloud;
  spec.seed = cfg.seed;

  const auto gam = bolza::solve_variational(spec, H, L);
  const auto lam = bolza::solve_control(spec, rep);
  auto gap_of = [](const bolza::BolzaResult& a, const bolza::BolzaResult& b) {
    if (a.value.is_infinite() || b.value.is_infinite()) return a.value == b.value ? 0.0 : HUGE_VAL;
    return std::abs(a.value.value() - b.value.value());
  };
  const double gap = gap_of(gam, lam);
  const double tol = 3.0 * (gam.h_t + gam.h_x) + gam.sample_gap;
  const double lower = bolza::lower_bound(spec, H);
  const bool lower_ok = gam.value.raw() >= lower && lam.value.raw() >= lower;

  json refine = nullptr;
  bool refine_ok = true;
  double gap2 = 0.0;
  if (cfg.refine) {
    bolza::BolzaSpec fine = spec;
    fine.Nt = 2 * spec.Nt;
    fine.Nx = 2 * (spec.Nx - 1) + 1;
    gap2 = gap_of(bolza::solve_variational(fine, H, L), bolza::solve_control(fine, rep));
    refine_ok = gap2 <= 1e-12 || gap / gap2 >= 1.5;
    refine = json{{"Nt", fine.Nt}, {"Nx", fine.Nx}, {"gap", number(gap2)}, {"pass", refine_ok}};
  }

  const auto Vv = bolza::value_function(spec, H, L);
  const auto Vc = bolza::value_function(spec, rep);
  double worst = 0.0;
  std::size_t pattern_mismatch = 0;
  for (std::size_t i = 0; i < Vv.V.size(); ++i) {
    if (Vv.V[i].is_finite() != Vc.V[i].is_finite()) {
      ++pattern_mismatch;
    } else if (Vv.V[i].is_finite()) {
      worst = std::max(worst, std::abs(Vv.V[i].value() - Vc.V[i].value()));
    }
  }
  const double vtol = 3.0 * (gam.h_t + gam.h_x);
  bool terminal_exact = true;
  const std::size_t K = Vv.t.size() - 1;
  for (std::size_t j = 0; j < Vv.x.size(); ++j) {
    const double g = terminal_g(gname, Vv.x[j]).raw();
    terminal_exact = terminal_exact && Vv.at(K, j).raw() == g && Vc.at(K, j).raw() == g;
  }
  const bool value_ok = pattern_mismatch == 0 && worst <= vtol && terminal_exact;
  const bool pass = gap <= tol && lower_ok && refine_ok && value_ok;

  std::filesystem::create_directories(cfg.out);
  bolza::write_arc_csv(cfg.out / "arc_variational.csv", gam.arc);
  bolza::write_arc_csv(cfg.out / "arc_control.csv", lam.arc);
  Vv.write_csv(cfg.out / "value_variational.csv");
  Vc.write_csv(cfg.out / "value_control.csv");
  json j = header(cfg);
  j["status"] = pass ? "PASS" : "FAIL";
  j["Nt"] = cfg.Nt;
  j["Nx"] = cfg.Nx;
  j["x0"] = number(cfg.x0);
  j["g"] = gname;
  j["M"] = number(spec.M);
  j["radius"] = number(gam.radius);
  j["h_t"] = number(gam.h_t);
  j["h_x"] = number(gam.h_x);
  j["sample_gap"] = number(gam.sample_gap);
  j["min_variational"] = number(gam.value.raw());
  j["min_control"] = number(lam.value.raw());
  j["variational_status"] = gam.status;
  j["control_status"] = lam.status;
  j["gap"] = number(gap);
  j["gap_tolerance"] = number(tol);
  j["lower_bound"] = number(lower);
  j["lower_bound_pass"] = lower_ok;
  j["refinement"] = refine;
  j["value_max_difference"] = number(worst);
  j["value_tolerance"] = number(vtol);
  j["value_pattern_mismatch"] = pattern_mismatch;
  j["terminal_exact"] = terminal_exact;
  j["value_lipschitz_t0"] = number(Vv.lipschitz_modulus(0));
  write_json(cfg, "bolza.json", j);
  say(cfg, "min_variational={} min_control={} gap={} tolerance={} {}\n", io::format_double(gam.value.raw()),
             io::format_double(lam.value.raw()), io::format_double(gap), io::format_double(tol),
             gap <= tol ? "PASS" : "FAIL");
  say(cfg, "lower_bound={} {}\n", io::format_double(lower), lower_ok ? "PASS" : "FAIL");
  if (cfg.refine) say(cfg, "refined gap={} {}\n", io::format_double(gap2), refine_ok ? "PASS" : "FAIL");
  say(cfg, "value tables max difference={} tolerance={} terminal_exact={} {}\n", io::format_double(worst),
             io::format_double(vtol), terminal_exact, value_ok ? "PASS" : "FAIL");
  return pass ? kPass : kAuditFailed;
}

int cmd_catalog(const RunConfig& cfg) {
  json j;
  j["command"] = "catalog";
  j["entries"] = json::array();
  for (const auto& e : models::catalog()) {
    json triples = json::array();
    for (const auto& t : e.triples) triples.push_back(t.name);
    j["entries"].push_back(
        json{{"name", e.name}, {"description", e.description}, {"blc_holds", e.blc_holds}, {"triples", triples}});
    say(cfg, "{:<5} blc={} {}\n", e.name, e.blc_holds ? "yes" : "no", e.description);
  }
  write_json(cfg, "catalog.json", j);
  return kPass;
}

}  // namespace hamrep::cli
