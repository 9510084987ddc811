#pragma once

// Closed-form circuit quantization: from transmission-line and qubit circuit
// constants to (omega_r, omega_q, g_C, g_L) for a single resonator mode.
//
// Inputs are SI except E_J (GHz, i.e. E_J / h) and the external flux (in units
// of the flux quantum). Outputs are linear frequencies in GHz.
//
// The resonator field is expanded in normalized mode functions f_n (units
// 1/sqrt(m)), so the aggregate constants entering the mode Hamiltonian are the
// per-unit-length values: C_0 = C' and L_0 = L'. With that reading the
// uncoupled mode frequency is v_p k_r with v_p = 1/sqrt(L' C').

#include "armsim/arm_model.hpp"

namespace armsim {

struct CircuitParams {
    double c_per_len = 0.0;  // C', F/m
    double l_per_len = 0.0;  // L', H/m
    double length = 0.0;     // resonator length, m
    double c_g = 0.0;        // coupling capacitance, F
    double c_q = 0.0;        // qubit capacitance, F
    double l_q = 0.0;        // qubit shunt inductance, H
    double e_j = 0.0;        // Josephson energy, GHz
    double i_c = 0.0;        // critical current, A
    double m = 0.0;          // mutual inductance, H
    double x_c = 0.0;        // capacitive tap position, m
    double x_m = 0.0;        // inductive tap position, m
    double phi_ext = 0.0;    // external flux, units of Phi_0
    int mode_index = 1;

    void validate() const;
};

/// Energies in joules (E_Cqr in J m, see header note); C_0, L_0 per unit length.
struct EnergyCoefficients {
    double e_cq = 0.0;
    double e_cr = 0.0;
    double e_cqr = 0.0;
    double e_lr = 0.0;  // 1 / (2 L_0)
    double e_lq = 0.0;  // 1 / (2 L_q)
    double c_0 = 0.0;
    double l_0 = 0.0;
};

struct DerivedModel {
    double omega_r = 0.0;
    double omega_q = 0.0;
    double g_c = 0.0;
    double g_l = 0.0;

    /// ArmParams in the (g_C, g_L) representation; loss rates and truncation
    /// are copied from `base`.
    ArmParams to_arm_params(const ArmParams& base) const;
};

/// Normalized resonator eigenmode f_n(x) on [-l/2, l/2].
double mode_function(int n, double length, double x);
double mode_function_derivative(int n, double length, double x);

double wavenumber(int n, double length);

EnergyCoefficients charging_energies(const CircuitParams& params);

/// Quadratic flux coefficient of the qubit potential, 1/(2 L_q) plus the
/// harmonic part of the Josephson term at the given flux bias (J / Wb^2).
double qubit_inductive_energy(const CircuitParams& params, const EnergyCoefficients& energies);

DerivedModel derive_model(const CircuitParams& params);

/// Adjust C_g (bisection) and then M (linear) so that derive_model reproduces
/// the target (g_C, g_L) within 0.1%. Throws SolverError if unreachable.
CircuitParams solve_for_targets(const CapacitiveInductive& target, const CircuitParams& tmpl);

}  // namespace armsim
