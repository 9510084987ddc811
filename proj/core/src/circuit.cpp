#include "armsim/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "armsim/errors.hpp"
#include "armsim/units.hpp"

namespace armsim {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument("CircuitParams: " + message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

void check_position(double length, double x, const char* fn) {
    if (!std::isfinite(x) || std::abs(x) > 0.5 * length * (1.0 + 1e-12)) {
        throw std::invalid_argument(std::string(fn) + ": position " + std::to_string(x) +
                                    " m lies outside the resonator");
    }
}

// Zero-point amplitudes of H = 4 E_C n^2 + K phi^2 with n = Q/2e and
// [phi, Q] = i hbar: n_zpf = (hbar^2 K / (64 e^2 E_C))^(1/4),
// phi_zpf = (hbar^2 E_C / (4 e^2 K))^(1/4).
double charge_zpf(double e_c, double stiffness) {
    constexpr double e = units::elementary_charge;
    return std::pow(units::hbar * units::hbar * stiffness / (64.0 * e * e * e_c), 0.25);
}

double flux_zpf(double e_c, double stiffness) {
    constexpr double e = units::elementary_charge;
    return std::pow(units::hbar * units::hbar * e_c / (4.0 * e * e * stiffness), 0.25);
}

// omega = 4 sqrt(E_C K) in units 2e = hbar = 1; in SI omega = 2 sqrt(E_C K) / e.
double oscillator_frequency_ghz(double e_c, double stiffness) {
    return units::rad_per_s_to_ghz(2.0 * std::sqrt(e_c * stiffness) / units::elementary_charge);
}

}  // namespace

void CircuitParams::validate() const {
    require(positive(c_per_len), "C' must be > 0");
    require(positive(l_per_len), "L' must be > 0");
    require(positive(length), "length must be > 0");
    require(std::isfinite(c_g) && c_g >= 0.0, "C_g must be >= 0");
    require(positive(c_q), "C_q must be > 0");
    require(positive(l_q), "L_q must be > 0");
    require(std::isfinite(e_j) && e_j >= 0.0, "E_J must be >= 0");
    require(std::isfinite(i_c) && i_c >= 0.0, "I_c must be >= 0");
    require(std::isfinite(m) && m >= 0.0, "M must be >= 0");
    require(std::isfinite(phi_ext), "phi_ext must be finite");
    require(mode_index >= 1, "mode_index must be >= 1");
    check_position(length, x_c, "CircuitParams x_C");
    check_position(length, x_m, "CircuitParams x_M");
}

ArmParams DerivedModel::to_arm_params(const ArmParams& base) const {
    ArmParams p = base;
    p.omega_r = omega_r;
    p.omega_q = omega_q;
    p.coupling = CapacitiveInductive{g_c, g_l};
    return p;
}

double wavenumber(int n, double length) { return n * units::pi / length; }

double mode_function(int n, double length, double x) {
    if (n < 1) throw std::invalid_argument("mode_function: mode index must be >= 1");
    check_position(length, x, "mode_function");
    const double norm = std::sqrt(2.0 / length);
    const double arg = wavenumber(n, length) * x;
    return n % 2 == 1 ? norm * std::sin(arg) : norm * std::cos(arg);
}

double mode_function_derivative(int n, double length, double x) {
    if (n < 1) throw std::invalid_argument("mode_function_derivative: mode index must be >= 1");
    check_position(length, x, "mode_function_derivative");
    const double norm = std::sqrt(2.0 / length);
    const double k = wavenumber(n, length);
    const double arg = k * x;
    return n % 2 == 1 ? norm * k * std::cos(arg) : -norm * k * std::sin(arg);
}

EnergyCoefficients charging_energies(const CircuitParams& p) {
    p.validate();
    constexpr double e = units::elementary_charge;
    const double f = mode_function(p.mode_index, p.length, p.x_c);
    const double f2 = f * f;
    const double c0 = p.c_per_len;
    const double c_sigma = p.c_g + p.c_q;
    const double mixed = f2 * p.c_g * p.c_q;  // f^2 C_g C_q
    const double det = mixed + c0 * c_sigma;
    const double det2 = det * det;

    EnergyCoefficients out;
    out.c_0 = c0;
    out.l_0 = p.l_per_len;
    out.e_cq = 0.5 * e * e * (f2 * f2 * p.c_g * p.c_g * p.c_q + 2.0 * c0 * f2 * p.c_g * c_sigma + c0 * c0 * c_sigma) / det2;
    out.e_cr = 0.5 * e * e * c_sigma * (mixed + 2.0 * c0 * c_sigma) / (2.0 * det2);
    out.e_cqr = 0.5 * e * e * p.c_g * (mixed + 2.0 * c0 * c_sigma) / det2;
    out.e_lr = 1.0 / (2.0 * out.l_0);
    out.e_lq = 1.0 / (2.0 * p.l_q);
    return out;
}

double qubit_inductive_energy(const CircuitParams& p, const EnergyCoefficients& energies) {
    const double phase_per_flux = units::two_pi / units::flux_quantum;
    const double e_j = units::ghz_to_joules(p.e_j) * std::cos(units::two_pi * p.phi_ext);
    return energies.e_lq + phase_per_flux * phase_per_flux * e_j / 2.0;
}

DerivedModel derive_model(const CircuitParams& p) {
    const EnergyCoefficients en = charging_energies(p);
    const double k = wavenumber(p.mode_index, p.length);
    const double stiff_r = k * k * en.e_lr;
    const double stiff_q = qubit_inductive_energy(p, en);
    if (!(stiff_q > 0.0)) {
        throw std::invalid_argument("derive_model: qubit potential is not confining at this flux bias");
    }

    DerivedModel out;
    out.omega_r = oscillator_frequency_ghz(en.e_cr, stiff_r);
    out.omega_q = oscillator_frequency_ghz(en.e_cq, stiff_q);

    const double f_c = mode_function(p.mode_index, p.length, p.x_c);
    const double df_m = mode_function_derivative(p.mode_index, p.length, p.x_m);
    const double g_c = 8.0 * en.e_cqr * f_c * charge_zpf(en.e_cq, stiff_q) * charge_zpf(en.e_cr, stiff_r);
    const double g_l = p.m / en.l_0 * df_m * p.i_c * (units::two_pi / units::flux_quantum) *
                       flux_zpf(en.e_cq, stiff_q) * flux_zpf(en.e_cr, stiff_r);
    out.g_c = units::joules_to_ghz(g_c);
    out.g_l = units::joules_to_ghz(g_l);
    return out;
}

CircuitParams solve_for_targets(const CapacitiveInductive& target, const CircuitParams& tmpl) {
    tmpl.validate();
    CircuitParams p = tmpl;

    // g_C: sign is fixed by the tap position, magnitude grows with C_g.
    const double f_c = mode_function(p.mode_index, p.length, p.x_c);
    if (target.g_c == 0.0) {
        p.c_g = 0.0;
    } else {
        if (f_c == 0.0 || std::signbit(f_c) != std::signbit(target.g_c)) {
            throw SolverError("solve_for_targets: g_C sign is fixed by the capacitive tap position");
        }
        const double want = std::abs(target.g_c);
        auto magnitude = [&p](double c_g) {
            CircuitParams q = p;
            q.c_g = c_g;
            return std::abs(derive_model(q).g_c);
        };
        double lo = 0.0;
        double hi = tmpl.c_g > 0.0 ? tmpl.c_g : tmpl.c_q;
        const double cap = 1e3 * tmpl.c_q;
        while (magnitude(hi) < want) {
            lo = hi;
            hi *= 2.0;
            if (hi > cap) throw SolverError("solve_for_targets: g_C target unreachable within C_g bounds");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (magnitude(mid) < want ? lo : hi) = mid;
        }
        p.c_g = 0.5 * (lo + hi);
    }

    // g_L is linear in M at fixed geometry.
    if (target.g_l == 0.0) {
        p.m = 0.0;
    } else {
        CircuitParams unit = p;
        unit.m = 1e-12;
        const double per_m = derive_model(unit).g_l / unit.m;
        if (per_m == 0.0 || std::signbit(per_m) != std::signbit(target.g_l)) {
            throw SolverError("solve_for_targets: g_L sign is fixed by the inductive tap position");
        }
        p.m = target.g_l / per_m;
    }
    return p;
}

}  // namespace armsim
