#pragma once

#include <string>
#include <vector>

#include "nhs/grid.hpp"
#include "nhs/norms.hpp"
#include "nhs/solver.hpp"

namespace nhs {

/// Shortest decimal text that round-trips to the same double
/// (std::to_chars); locale-independent, hence byte-stable across runs.
std::string format_double(double v);

/// Write content to path, creating parent directories as needed. Throws
/// std::runtime_error when the file cannot be written.
void write_text(const std::string& path, const std::string& content);

/// Column-ordered table serialized RFC-4180 style: cells holding commas,
/// quotes, or newlines are quoted, inner quotes doubled. Rows must match
/// the column count.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
};

std::string to_csv(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

/// JSON text (2-space indent, key order fixed) of a norm report; keys are
/// the norm names used throughout: bmo_N, tmo, tent_inf2, tent_inf1,
/// tent_12, bmo_inv_N, weighted_linf, path_eps, hardy, square_fn_l1,
/// plus the discretization strings.
std::string to_json_string(const NormReport& report);

/// JSON text of solver diagnostics: verdict, residual, contraction
/// estimate, and the per-iteration table.
std::string to_json_string(const SolverDiagnostics& diag);

/// Node-per-row dump of a scalar field: '#' metadata lines, then a header
/// "index,x1,...,xn,value" and one row per node in storage order.
void write_field_csv(const std::string& path, const ScalarField& f);

/// Reproducibility sidecar written into every run directory: which
/// experiment ran, the exact resolved configuration (canonical key=value
/// lines) with its FNV-1a fingerprint, and the discretization in force.
/// Deliberately free of timestamps, hostnames, and thread counts —
/// rerunning a config must reproduce the manifest byte for byte.
struct RunManifest {
    int schema_version = 1;
    std::string experiment;
    std::string config_echo;  // canonical key=value lines, '\n'-separated
    std::string grid;
    std::string ball_family;
    std::string kernel_variant;
};

std::string to_json_string(const RunManifest& m);
void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace nhs
