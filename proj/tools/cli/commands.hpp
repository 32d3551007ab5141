#pragma once

#include "cli/config.hpp"

namespace hamrep::cli {

/// `representation_trace.csv` and `audit.json`.
int cmd_represent(const RunConfig& cfg);
/// `verify.json`.
int cmd_verify(const RunConfig& cfg);
/// `stability.json` and `stability_rates.csv`.
int cmd_stability(const RunConfig& cfg);
/// `bolza.json`, `arc_variational.csv`, `arc_control.csv`,
/// `value_variational.csv` and `value_control.csv`.
int cmd_bolza(const RunConfig& cfg);
/// `catalog.json`.
int cmd_catalog(const RunConfig& cfg);

}  // namespace hamrep::cli
