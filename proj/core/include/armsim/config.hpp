#pragma once

// Run configuration: a sectioned key = value text format with unit-suffixed
// keys. Parsing is strict (unknown keys and duplicate keys are rejected) and
// every resolved value, defaults included, is kept for the output header.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "armsim/arm_model.hpp"
#include "armsim/circuit.hpp"
#include "armsim/purcell.hpp"
#include "armsim/spectra.hpp"

namespace armsim {

struct OutputSpec {
    std::optional<std::string> csv_path;  // stdout when absent
    std::optional<std::string> svg_path;
    bool normalize = true;
};

struct EngineSpec {
    int n_max = 10;
    double atol = 1e-10;
    double rtol = 1e-8;
    int workers = 0;  // 0 = hardware concurrency
};

struct RunConfig {
    ArmParams model;
    std::optional<CircuitParams> circuit;
    SweepSpec sweep;

    // Subcommand-specific sweep inputs.
    std::vector<double> chi_targets;  // GHz
    PurcellInversion inversion = PurcellInversion::sweep_qubit;
    std::vector<int> n_max_list;
    ConvergenceQuantity quantity = ConvergenceQuantity::splitting;
    double theta_lo = 0.0;
    double theta_hi = 1.5707963267948966;

    OutputSpec output;
    EngineSpec engine;

    /// "section.key = value" for every resolved setting except the worker
    /// count, in a fixed order.
    std::vector<std::string> resolved;

    /// Model parameters with circuit-derived frequencies and couplings applied.
    ArmParams effective_model() const;
};

/// Throws ConfigError with line context or the offending key.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Shortest round-trip decimal form (locale independent).
std::string format_number(double value);
/// Fixed 17-significant-digit form used for data columns; "nan" for NaN.
std::string format_data(double value);

}  // namespace armsim
