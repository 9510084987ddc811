#pragma once

// Purcell decay: closed forms, a decay-fit oracle, and the equal-chi
// comparison between the JC and AJC channels.

#include <optional>
#include <span>
#include <vector>

#include "armsim/arm_model.hpp"
#include "armsim/operators.hpp"

namespace armsim {

struct PurcellReport {
    double gamma_jc = 0.0;    // kappa g_JC^2 / (Delta^2 + kappa^2 + g_JC^2)
    double gamma_ajc = 0.0;   // kappa g_AJC^2 / (Sigma^2 + kappa^2 + 2 g_AJC^2)
    double gamma_rabi = 0.0;  // gamma_jc + gamma_ajc
};

PurcellReport purcell_formulas(const ArmParams& params);

struct PurcellFit {
    double rate = 0.0;       // GHz (fitted decay constant / 2pi)
    double residual = 0.0;   // rms of the log-population fit
    std::size_t samples = 0; // points used in the fit
    double horizon = 0.0;    // ns
};

/// Decay-fit oracle: evolve |q,0><q,0| under H and kappa D[a] only (gamma is
/// ignored) with the exact propagator, and fit the log of the population of
/// qubit level q where it lies in [0.2, 0.8]. If the population never leaves
/// that band the whole run is fitted. Throws SolverError when the decay is not
/// exponential (rms log residual > 0.05).
///
/// `initial = excited` is the usual relaxation experiment. Under a pure
/// counter-rotating coupling |e,0> is dark (a sigma_- annihilates it), and the
/// state that leaks through the resonator is |g,0>, hybridized with |e,1>;
/// pass `initial = ground` to measure that channel.
PurcellFit purcell_numeric(const ArmParams& params, QubitLevel initial = QubitLevel::excited);

enum class PurcellInversion {
    sweep_qubit,     // fixed g; omega_q chosen to reach chi
    scale_coupling,  // fixed omega_q; g chosen to reach chi
};

struct PurcellCurveRow {
    double chi = 0.0;
    std::optional<double> gamma_jc_over_kappa;
    std::optional<double> gamma_ajc_over_kappa;
    std::optional<double> omega_q_jc;  // GHz
    std::optional<double> omega_q_ajc;
    std::optional<double> g_jc;        // GHz
    std::optional<double> g_ajc;
};

/// For each |chi| target, invert chi = g^2/Delta (JC, theta = 0) and
/// |chi| = g^2/Sigma (AJC, theta = pi/2) and evaluate Gamma_P / kappa.
/// Unreachable targets (omega_q <= 0) are left empty.
std::vector<PurcellCurveRow> purcell_comparison_curve(std::span<const double> chi_targets, const ArmParams& tmpl,
                                                      PurcellInversion mode = PurcellInversion::sweep_qubit);

}  // namespace armsim
