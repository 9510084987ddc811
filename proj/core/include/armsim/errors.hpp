#pragma once

#include <stdexcept>
#include <string>

namespace armsim {

// Malformed or inconsistent user input (config files, CLI arguments).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine could not deliver a result that satisfies its contract:
// singular solves, degenerate steady states, step-size underflow, failed fits.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace armsim
