#pragma once

#include <string>

#include "nhs/config.hpp"

namespace nhs {

/// Execute the experiment named in cfg, writing its CSV/JSON artifacts
/// and a run manifest into out_dir (created if missing). Output bytes
/// depend only on the config (including its seed), never on thread count
/// or wall clock. Throws config_error for semantic config problems
/// (e.g. an unknown input_id) and numeric_error for numerical failures.
void run_experiment(const RunConfig& cfg, const std::string& out_dir);

}  // namespace nhs
