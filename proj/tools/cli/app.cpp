#include "cli/app.hpp"

#include <algorithm>
#include <exception>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cli/commands.hpp"
#include "hamrep/error.hpp"

namespace hamrep::cli {

namespace {

void add_common(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--example", cfg.example, "Catalog example id (EX1, EX2, EX4, ABS)");
  sub.add_option("--model-file", cfg.model_file, "Sampled Hamiltonian grid `x,p,H`")->check(CLI::ExistingFile);
  sub.add_option("--out", cfg.out, "Output directory");
  sub.add_option("--seed", cfg.seed, "Seed for every sampled control set");
}

// Moves `--config FILE` out of the arguments and splices the file's
// `--key=value` arguments right after the subcommand name, so explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> file_args;
  for (std::size_t i = 1; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      auto more = config_file_args(args[i + 1]);
      file_args.insert(file_args.end(), more.begin(), more.end());
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
    } else if (args[i].rfind("--config=", 0) == 0) {
      auto more = config_file_args(args[i].substr(9));
      file_args.insert(file_args.end(), more.begin(), more.end());
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  if (file_args.empty()) return args;
  const auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) { return a.rfind('-', 0) != 0; });
  if (sub == args.end()) throw InputError("--config needs a subcommand");
  args.insert(sub + 1, file_args.begin(), file_args.end());
  return args;
}

}  // namespace

int run(const std::vector<std::string>& raw) {
  RunConfig cfg;
  CLI::App app{"Faithful representations of Hamiltonians: construction and audits", "hamrep"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.fallthrough();
  app.add_option("--config", "Flat key = value file; keys mirror the long flags");
  app.add_flag("--quiet", cfg.quiet, "Suppress the summary lines");

  auto* represent = app.add_subcommand("represent", "Construct (B, f, l) and audit it");
  add_common(*represent, cfg);
  represent->add_option("--mesh-t", cfg.mesh_t, "Time nodes of the audit mesh")->check(CLI::PositiveNumber);
  represent->add_option("--mesh-x", cfg.mesh_x, "State nodes of the audit mesh on [-1, 1]")->check(CLI::Range(2, 1 << 20));
  represent->add_option("--controls", cfg.controls, "Cloud controls for the sup and sandwich audits");
  represent->add_option("--trace-controls", cfg.trace_controls, "Controls per mesh node in the trace file");
  represent->add_option("--pairs", cfg.pairs, "Sampled pairs for the (A1)/(A2) audit");
  represent->add_option("--R", cfg.R, "Ball radius of the (A1) audit")->check(CLI::PositiveNumber);
  represent->add_option("--tol-sup-low", cfg.tol_sup_low, "Allowed negative sup residual");
  represent->add_option("--tol-sup-high", cfg.tol_sup_high, "Allowed positive sup residual");
  represent->add_option("--tol-member", cfg.tol_member, "Epigraph membership slack");
  represent->add_option("--tol-graph", cfg.tol_graph, "Graph recovery tolerance");

  auto* verify = app.add_subcommand("verify", "Check the structural conditions of H and L");
  add_common(*verify, cfg);
  verify->add_option("--check", cfg.check, "Condition to check")
      ->check(CLI::IsMember({"all", "H1-H4", "HLC", "LLC_ELC", "BLC"}));
  verify->add_option("--R", cfg.R, "Ball radius")->check(CLI::PositiveNumber);

  auto* stab = app.add_subcommand("stability", "Convergence of e under a perturbation family");
  add_common(*stab, cfg);
  stab->add_option("--rule", cfg.rule, "Perturbation rule")->check(CLI::IsMember({"shift", "bump", "drift"}));
  stab->add_option("--imax", cfg.imax, "Largest index")->check(CLI::Range(3, 1 << 16));
  stab->add_option("--rho", cfg.rho, "Perturbation size")->check(CLI::NonNegativeNumber);
  stab->add_option("--tol-stability", cfg.tol_stability, "Final deviation tolerance");
  stab->add_option("--tol-limit", cfg.tol_limit, "Set limit tolerance");

  auto* bz = app.add_subcommand("bolza", "Variational and control Bolza problems by dynamic programming");
  add_common(*bz, cfg);
  bz->add_option("--Nt", cfg.Nt, "Time steps")->check(CLI::Range(1, 1 << 20));
  bz->add_option("--Nx", cfg.Nx, "State nodes")->check(CLI::Range(2, 1 << 20));
  bz->add_option("--x0", cfg.x0, "Initial state");
  bz->add_option("--g", cfg.g, "Terminal cost")->check(CLI::IsMember({"zero", "abs", "square"}));
  bz->add_option("--M", cfg.M, "Endpoint bound M (at least |x0|)")->check(CLI::NonNegativeNumber);
  bz->add_option("--cloud", cfg.cloud, "Cloud controls per state on top of the graph controls");
  bz->add_option("--refine", cfg.refine, "Also solve on the halved grid");

  auto* cat = app.add_subcommand("catalog", "List the catalog examples");
  cat->add_option("--out", cfg.out, "Output directory");

  std::vector<std::string> args;
  try {
    args = expand_config(raw);
  } catch (const std::exception& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (*represent) return cmd_represent(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*stab) return cmd_stability(cfg);
    if (*bz) return cmd_bolza(cfg);
    return cmd_catalog(cfg);
  } catch (const InputError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kUsage;
  } catch (const BlcRequiredError& e) {
    fmt::print(stderr, "BLC_VIOLATED: {}\n", e.what());
    return kConditionViolated;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kAuditFailed;
  }
}

int run(int argc, const char* const* argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace hamrep::cli
