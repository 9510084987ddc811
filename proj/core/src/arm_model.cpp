#include "armsim/arm_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace armsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument("ArmParams: " + message);
}

}  // namespace

JcAjc to_jc_ajc(const CapacitiveInductive& cl) { return {cl.g_c + cl.g_l, cl.g_c - cl.g_l}; }

CapacitiveInductive to_capacitive_inductive(const JcAjc& c) {
    return {0.5 * (c.g_jc + c.g_ajc), 0.5 * (c.g_jc - c.g_ajc)};
}

Polar to_polar(const JcAjc& c) { return {std::hypot(c.g_jc, c.g_ajc), std::atan2(c.g_ajc, c.g_jc)}; }

JcAjc from_polar(const Polar& p) { return {p.g * std::cos(p.theta), p.g * std::sin(p.theta)}; }

JcAjc ArmParams::jc_ajc() const {
    return std::visit(overloaded{
                          [](const CapacitiveInductive& c) { return to_jc_ajc(c); },
                          [](const JcAjc& c) { return c; },
                          [](const Polar& p) { return from_polar(p); },
                      },
                      coupling);
}

Polar ArmParams::polar() const {
    if (const auto* p = std::get_if<Polar>(&coupling)) return *p;
    return to_polar(jc_ajc());
}

void ArmParams::validate() const {
    require(std::isfinite(omega_r) && omega_r > 0.0, "omega_r must be > 0");
    require(std::isfinite(omega_q), "omega_q must be finite");
    require(std::isfinite(kappa) && kappa >= 0.0, "kappa must be >= 0");
    require(std::isfinite(gamma) && gamma >= 0.0, "gamma must be >= 0");
    require(n_max >= 1, "n_max must be >= 1");
    if (const auto* p = std::get_if<Polar>(&coupling)) {
        require(std::isfinite(p->g) && p->g >= 0.0, "g must be >= 0");
        require(std::isfinite(p->theta) && std::abs(p->theta) <= std::numbers::pi,
                "theta must lie in [-pi, pi]");
    } else {
        const JcAjc c = jc_ajc();
        require(std::isfinite(c.g_jc) && std::isfinite(c.g_ajc), "couplings must be finite");
    }
}

DerivedDetunings detunings(const ArmParams& params) {
    return {params.omega_q - params.omega_r, params.omega_q + params.omega_r};
}

ArmParams with_polar(ArmParams params, double g, double theta) {
    params.coupling = Polar{g, theta};
    return params;
}

Operator jc_operator(const HilbertDims& dims) {
    const Operator a = embed(annihilation(dims.n_max()), Subsystem::resonator, dims);
    const Operator sp = embed(pauli(PauliAxis::plus), Subsystem::qubit, dims);
    const Operator sm = embed(pauli(PauliAxis::minus), Subsystem::qubit, dims);
    return a.adjoint() * sm + a * sp;
}

Operator ajc_operator(const HilbertDims& dims) {
    const Operator a = embed(annihilation(dims.n_max()), Subsystem::resonator, dims);
    const Operator sp = embed(pauli(PauliAxis::plus), Subsystem::qubit, dims);
    const Operator sm = embed(pauli(PauliAxis::minus), Subsystem::qubit, dims);
    return a.adjoint() * sp + a * sm;
}

Operator bare_hamiltonian(double omega_r, double omega_q, const HilbertDims& dims) {
    return omega_r * embed(number(dims.n_max()), Subsystem::resonator, dims) -
           (0.5 * omega_q) * embed(pauli(PauliAxis::z), Subsystem::qubit, dims);
}

Operator interaction_hamiltonian(const ArmParams& params) {
    const HilbertDims dims = params.dims();
    const JcAjc c = params.jc_ajc();
    return c.g_jc * jc_operator(dims) + c.g_ajc * ajc_operator(dims);
}

Operator build_hamiltonian(const ArmParams& params) {
    params.validate();
    return bare_hamiltonian(params.omega_r, params.omega_q, params.dims()) + interaction_hamiltonian(params);
}

Operator build_from_cl(const ArmParams& params) {
    params.validate();
    const auto* cl = std::get_if<CapacitiveInductive>(&params.coupling);
    if (cl == nullptr) {
        throw std::invalid_argument("build_from_cl: coupling must be given as (g_C, g_L)");
    }
    const HilbertDims dims = params.dims();
    const std::complex<double> i{0.0, 1.0};
    const Operator a = embed(annihilation(dims.n_max()), Subsystem::resonator, dims);
    const Operator sx = embed(pauli(PauliAxis::x), Subsystem::qubit, dims);
    const Operator sy = embed(pauli(PauliAxis::y), Subsystem::qubit, dims);

    const Operator h_c = (i * cl->g_c) * (a - a.adjoint()) * (-sy);
    const Operator h_l = cl->g_l * (a + a.adjoint()) * sx;
    const Operator h = bare_hamiltonian(params.omega_r, params.omega_q, dims) + h_c + h_l;

    // Frame rotation U = diag(u_q) (x) diag((-i)^n) with u_g = 1, u_e = -i.
    Eigen::VectorXcd u(dims.total_dim());
    const std::complex<double> phase_q[2] = {1.0, -i};
    for (int q = 0; q < 2; ++q) {
        std::complex<double> phase_n = 1.0;
        for (int n = 0; n <= dims.n_max(); ++n) {
            u(q * dims.resonator_dim() + n) = phase_q[q] * phase_n;
            phase_n *= -i;
        }
    }
    return u.asDiagonal() * h * u.conjugate().asDiagonal();
}

Operator drive_operator(const HilbertDims& dims) {
    const Operator a = annihilation(dims.n_max());
    return embed(a + a.adjoint(), Subsystem::resonator, dims);
}

RwaParts rwa_decompose(const Operator& h_int, const HilbertDims& dims) {
    const int d = dims.total_dim();
    if (h_int.rows() != d || h_int.cols() != d) {
        throw std::invalid_argument("rwa_decompose: matrix dimension does not match HilbertDims");
    }
    const int nr = dims.resonator_dim();
    auto excitations = [nr](int idx) { return idx % nr + idx / nr; };
    RwaParts parts{Operator::Zero(d, d), Operator::Zero(d, d)};
    for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) {
            if (excitations(r) == excitations(c)) {
                parts.jc_part(r, c) = h_int(r, c);
            } else {
                parts.ajc_part(r, c) = h_int(r, c);
            }
        }
    }
    return parts;
}

}  // namespace armsim
