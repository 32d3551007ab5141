#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hamrep {

/// Outcome of one sampled audit.
///
/// `worst_violation` is the largest signed excess over the allowed bound seen
/// on the samples (negative when every sample has room to spare, +inf when a
/// sample leaves the effective domain); `arg_worst` holds the coordinates of
/// that sample in the order documented by the producing check.
struct CheckReport {
  CheckReport() = default;
  explicit CheckReport(std::string name) : condition(std::move(name)) {}

  std::string condition;
  double worst_violation = -std::numeric_limits<double>::infinity();
  std::vector<double> arg_worst;
  bool pass = true;
  std::optional<double> empirical_constant;
  double tolerance = 0.0;
  std::size_t samples = 0;
  /// Free-form machine-readable status, e.g. "UNBOUNDED" for a BLC probe.
  std::string status;

  /// Folds one sample in; ties keep the earlier sample.
  void observe(double violation, std::vector<double> where) {
    ++samples;
    if (violation > worst_violation) {
      worst_violation = violation;
      arg_worst = std::move(where);
    }
  }
  /// Sets `pass` from the worst violation and the tolerance.
  void finish() { pass = !(worst_violation > tolerance); }
};

}  // namespace hamrep
