#pragma once

// Transmission spectra, splitting extraction, dispersive shifts and the
// sweet-spot search.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "armsim/arm_model.hpp"
#include "armsim/lindblad.hpp"

namespace armsim {

enum class StatePrep { steady, ground, excited };
enum class ResponseMethod { linear_response, time_domain };
enum class SecondAxis { none, qubit_freq, theta };

struct SweepSpec {
    std::vector<double> probe_grid;  // GHz, strictly increasing
    SecondAxis axis = SecondAxis::none;
    std::vector<double> axis_values;  // GHz or rad depending on axis
    StatePrep prep = StatePrep::steady;
    ResponseMethod method = ResponseMethod::linear_response;
    double eps_p = 1e-4;  // GHz, time-domain only

    void validate() const;
};

struct SpectrumPoint {
    double probe = 0.0;
    double axis_value = 0.0;
    std::complex<double> amplitude;
    double transmission = 0.0;  // |A| / max |A| over the slice
};

struct SpectrumResult {
    SecondAxis axis = SecondAxis::none;
    std::vector<double> probe_grid;
    std::vector<double> axis_values;  // one entry (NaN) when axis == none
    std::vector<SpectrumPoint> points;  // slice-major: slice * probe_count + probe

    std::size_t slice_count() const { return axis_values.size(); }
    std::span<const SpectrumPoint> slice(std::size_t i) const;
};

/// `params` with omega_q or theta replaced according to the axis.
ArmParams apply_axis(const ArmParams& params, SecondAxis axis, double value);

/// Reference state for linear response: the Liouvillian steady state, or the
/// dressed eigenstate closest to |g,0> / |e,0> (qubit-state-conditioned).
DensityMatrix reference_state(const ArmParams& params, const Liouvillian& l, StatePrep prep);

/// Linear-response (or time-domain) amplitudes of <a> over the sweep grid.
/// Grid points are solved on `workers` threads (0 = hardware concurrency);
/// the result is identical for any worker count.
SpectrumResult transmission_map(const ArmParams& params, const SweepSpec& sweep, int workers = 0);

struct TimeDomainOptions {
    double settle_time = 0.0;  // ns; 0 picks 12 / (pi kappa)
    double window = 0.0;       // ns; 0 picks max(50 ns, 200 probe periods)
    double rtol = 1e-8;
    double atol = 1e-10;
};

/// Amplitude of <a> at e^{-i 2pi omega_p t} per unit eps_p, from a driven
/// master-equation run started in `reference`.
std::complex<double> time_domain_amplitude(const ArmParams& params, const DensityMatrix& reference, double omega_p,
                                           double eps_p, const TimeDomainOptions& options = {});

// ---------------------------------------------------------------------------
// Peaks and splitting

struct Peak {
    double position = 0.0;
    double height = 0.0;  // normalized to the slice maximum
};

/// Interior local maxima with normalized height >= threshold, refined by
/// three-point parabolic interpolation; peaks closer than two grid steps are
/// merged (the higher one is kept). Sorted by position.
std::vector<Peak> find_peaks(std::span<const double> x, std::span<const double> y, double threshold = 0.5);

/// Separation of the two highest peaks above half height, or nullopt for a
/// single peak. Throws std::invalid_argument for < 3 points or no maximum.
std::optional<double> extract_splitting(std::span<const double> probe, std::span<const double> transmission);
std::optional<double> extract_splitting(std::span<const SpectrumPoint> slice);

/// Model-aware variant: every local maximum of |A| on the grid is refined by
/// a Brent search of |A(omega_p)| between its neighbours before the half-height
/// threshold is applied, so narrow lines that fall between grid points are not
/// lost.
std::vector<Peak> resolve_peaks(const ArmParams& params, std::span<const double> probe_grid,
                                StatePrep prep = StatePrep::steady, int workers = 1);
std::optional<double> measure_splitting(const ArmParams& params, std::span<const double> probe_grid,
                                        StatePrep prep = StatePrep::steady, int workers = 1);

// ---------------------------------------------------------------------------
// Dispersive regime

struct DispersiveReport {
    double chi_jc = 0.0;    // g_JC^2 / Delta
    double chi_ajc = 0.0;   // -g_AJC^2 / Sigma
    double chi_rabi = 0.0;  // chi_jc + chi_ajc
    std::optional<double> chi_numeric;
    double delta = 0.0;
    double sigma = 0.0;
    double theta = 0.0;
    std::vector<std::string> warnings;
};

/// Closed forms only; throws std::invalid_argument when Delta == 0.
DispersiveReport dispersive_formulas(const ArmParams& params);

/// Closed forms plus the exact-diagonalization value.
DispersiveReport dispersive_report(const ArmParams& params);

/// chi = ((E_e1 - E_e0) - (E_g1 - E_g0)) / 2 from the dressed spectrum at
/// n_max >= 20, states labelled by largest overlap with |q, n>. Throws
/// SolverError when a label's squared overlap is below 0.7.
double chi_numeric(const ArmParams& params);

/// Warnings when the dispersive approximation is questionable (|Delta| < 5 g_JC).
std::vector<std::string> dispersive_warnings(const ArmParams& params);

/// Root of chi_numeric(theta) on [theta_lo, theta_hi]: coarse scan, then
/// bisection. nullopt when chi does not change sign. Requires g > 0.
std::optional<double> sweet_spot(const ArmParams& params, double theta_lo, double theta_hi, int coarse_points = 33);

/// Root of g^2 cos^2 / Delta - g^2 sin^2 / Sigma in [0, pi/2], if any.
std::optional<double> sweet_spot_closed_form(const ArmParams& params);

struct ConditionedPeaks {
    double ground = 0.0;
    double excited = 0.0;
};

/// Resonator line positions with the qubit held in |g> and in |e>
/// (dressed-state references, gamma forced to zero).
ConditionedPeaks conditioned_peaks(const ArmParams& params, std::span<const double> probe_grid, int workers = 1);

// ---------------------------------------------------------------------------
// Truncation convergence

enum class ConvergenceQuantity { splitting, peak_position, chi };

struct ConvergenceRow {
    int n_max = 0;
    double value = 0.0;
    std::optional<double> relative_change;  // vs the previous row
};

std::vector<ConvergenceRow> convergence_check(const ArmParams& params, std::span<const int> n_max_list,
                                              ConvergenceQuantity quantity, std::span<const double> probe_grid,
                                              int workers = 1);

}  // namespace armsim
