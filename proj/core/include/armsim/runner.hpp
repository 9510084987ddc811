#pragma once

// Subcommand dispatch: turns a RunConfig into CSV (and optional SVG) text.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "armsim/config.hpp"

namespace armsim {

/// Library version string, e.g. "0.1.0".
std::string_view version();

enum class Subcommand { spectrum, splitting, dispersive, sweet_spot, purcell, circuit, convergence };

std::optional<Subcommand> parse_subcommand(std::string_view name);
std::string_view subcommand_name(Subcommand sub);

struct RunOutputs {
    std::string csv;
    std::optional<std::string> svg;  // produced only when `want_svg`
};

/// Runs one subcommand. Throws ConfigError when the config lacks what the
/// subcommand needs, SolverError (or std::invalid_argument for inconsistent
/// physical inputs) from the numerics. Output is independent of `workers`.
RunOutputs execute(Subcommand sub, const RunConfig& config, int workers, bool want_svg);

/// Worker count: ARM_SIM_WORKERS if set, else the config value.
int effective_workers(const RunConfig& config);

struct CliRequest {
    std::string subcommand;
    std::filesystem::path config_path;
    std::optional<std::filesystem::path> csv_path;
    std::optional<std::filesystem::path> svg_path;
};

/// Full CLI behaviour: 0 on success, 1 for configuration errors, 2 for
/// numerical failures. Errors are reported on `err` as a single line
///   error kind=<config|numeric> subcommand=<name> message="<text>"
/// CSV goes to the requested path or, when none is given, to `out`.
int run_subcommand(const CliRequest& request, std::ostream& out, std::ostream& err);

}  // namespace armsim
