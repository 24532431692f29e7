#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nhs/grid.hpp"

namespace nhs {

/// One experiment run, fully resolved. Parsed from a key=value file
/// (full-line '#' or ';' comments, no inline comments); every key has a
/// default except `experiment`. See schema_help() for the documented
/// schema.
struct RunConfig {
    std::string experiment;  // required; see valid_experiments()
    std::uint64_t seed = 42;

    // Discretization
    int dimension = 1;
    double half_width = 1.0;
    int points_per_axis = 128;
    int time_levels = 32;
    double time_horizon = 0.25;
    std::string kernel_variant = "neumann";  // neumann | dirichlet

    // Ball family
    int ball_coarsest = 1;
    int ball_finest = 4;
    int ball_lattice = 2;

    // Input selection
    int corpus_size = 20;
    std::string input_id;  // empty = experiment-specific default

    // Solver
    double data_scale = 1.0;
    int max_iterations = 25;
    double convergence_tol = 1e-10;
    std::string nonlinearity_direction = "e1";  // e1 | en
    int quadrature_points = 0;                  // 0 = twice the time levels
    std::string divergence_path = "kernel";     // kernel | fd
    std::vector<double> sweep_scales = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0};

    // Monte Carlo sample count for the kernel cross-check
    int mc_samples = 200;

    GridSpec make_grid() const;

    /// Canonical key=value lines (declaration order, normalized number
    /// formatting); hashed into the run manifest.
    std::string canonical_echo() const;
};

/// The experiment names `run` accepts, in documentation order.
const std::vector<std::string>& valid_experiments();

/// Parse and range-check a config text. Throws config_error with the
/// 1-based line of the offending entry (0 for file-wide problems such as
/// a missing required key).
RunConfig parse_config(const std::string& text);

/// Read a file and parse it; unreadable file -> config_error(0, ...).
RunConfig load_config(const std::string& path);

/// Human-readable schema: one line per key with type, default, and range.
std::string schema_help();

}  // namespace nhs
