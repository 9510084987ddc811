#pragma once

// Anisotropic Rabi model: coupling parameterizations and Hamiltonian builders.
//
// All frequencies and rates are linear frequencies in GHz (the "/2pi" values);
// the Hamiltonian matrices are therefore in GHz as well.

#include <variant>

#include "armsim/operators.hpp"

namespace armsim {

/// Capacitive and inductive coupling strengths (g_C, g_L).
struct CapacitiveInductive {
    double g_c = 0.0;
    double g_l = 0.0;
};

/// Excitation-conserving and counter-rotating couplings (g_JC, g_AJC).
struct JcAjc {
    double g_jc = 0.0;
    double g_ajc = 0.0;
};

/// Total coupling and mixing angle (g, theta).
struct Polar {
    double g = 0.0;
    double theta = 0.0;
};

using Coupling = std::variant<CapacitiveInductive, JcAjc, Polar>;

JcAjc to_jc_ajc(const CapacitiveInductive& cl);
CapacitiveInductive to_capacitive_inductive(const JcAjc& c);
Polar to_polar(const JcAjc& c);
JcAjc from_polar(const Polar& p);

struct ArmParams {
    double omega_r = 5.0;
    double omega_q = 5.0;
    Coupling coupling = Polar{};
    double kappa = 0.0;
    double gamma = 0.0;
    int n_max = 10;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    HilbertDims dims() const { return HilbertDims(n_max); }
    JcAjc jc_ajc() const;
    Polar polar() const;
};

struct DerivedDetunings {
    double delta = 0.0;  // omega_q - omega_r
    double sigma = 0.0;  // omega_q + omega_r
};

DerivedDetunings detunings(const ArmParams& params);

/// Copy of `params` with the coupling replaced by Polar{g, theta}.
ArmParams with_polar(ArmParams params, double g, double theta);

/// a^dag sigma_- + a sigma_+
Operator jc_operator(const HilbertDims& dims);
/// a^dag sigma_+ + a sigma_-
Operator ajc_operator(const HilbertDims& dims);

/// omega_r a^dag a - (omega_q / 2) sigma_z
Operator bare_hamiltonian(double omega_r, double omega_q, const HilbertDims& dims);

/// g cos(theta) JC + g sin(theta) AJC, for any coupling representation.
Operator interaction_hamiltonian(const ArmParams& params);

/// bare + interaction on the composite space.
Operator build_hamiltonian(const ArmParams& params);

/// Hamiltonian assembled from the capacitive i g_C (a - a^dag) sigma_y and
/// inductive g_L (a + a^dag) sigma_x terms. Requires the CapacitiveInductive
/// representation.
///
/// The two-level images of the qubit charge and flux operators are only fixed
/// up to phases. We take sigma_y -> -sigma_y in the charge term and express the
/// result in the frame a -> i a, sigma_+ -> -i sigma_+ (a diagonal unitary that
/// leaves the bare Hamiltonian invariant). With those choices the matrix equals
/// build_hamiltonian with g_JC = g_C + g_L and g_AJC = g_C - g_L entry by entry.
Operator build_from_cl(const ArmParams& params);

/// Probe coupling (a + a^dag) on the composite space. The lab-frame drive term
/// is 2 eps_p (a + a^dag) cos(2 pi omega_p t).
Operator drive_operator(const HilbertDims& dims);

struct RwaParts {
    Operator jc_part;
    Operator ajc_part;
};

/// Split an interaction matrix into the block that conserves
/// N_exc = a^dag a + sigma_+ sigma_- and the remainder. jc_part + ajc_part
/// reproduces the input exactly.
RwaParts rwa_decompose(const Operator& h_int, const HilbertDims& dims);

}  // namespace armsim
