#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hamrep::cli {

/// Settings shared by all subcommands plus the per-command knobs. Every field
/// is a flag `--key` and a config file key `key`.
struct RunConfig {
  std::string command;
  std::string example = "EX2";
  std::string model_file;
  std::filesystem::path out = ".";
  std::uint64_t seed = 1;
  /// Suppress the summary lines on stdout.
  bool quiet = false;

  // represent
  int mesh_t = 3;
  int mesh_x = 5;
  std::size_t controls = 10000;
  std::size_t trace_controls = 16;
  std::size_t pairs = 2000;
  double tol_sup_low = 1e-9;
  double tol_sup_high = 5e-2;
  double tol_member = 1e-6;
  double tol_graph = 1e-6;

  // verify
  std::string check = "all";
  double R = 1.0;

  // stability
  std::string rule = "shift";
  int imax = 64;
  double rho = 1.0;
  double tol_stability = 1e-2;
  double tol_limit = 1e-2;

  // bolza
  int Nt = 50;
  int Nx = 201;
  double x0 = 0.0;
  std::string g = "zero";
  double M = 0.0;
  std::size_t cloud = 64;
  bool refine = true;
};

/// Reads a flat `key = value` file (blank lines and `#` comments skipped) and
/// returns the equivalent `--key=value` arguments. Throws InputError on a line
/// without `=`.
std::vector<std::string> config_file_args(const std::filesystem::path& path);

}  // namespace hamrep::cli
