#include "armsim/purcell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "armsim/errors.hpp"
#include "armsim/lindblad.hpp"
#include "armsim/units.hpp"

namespace armsim {

namespace {

constexpr int kSamples = 400;
constexpr int kMaxDoublings = 30;

struct LineFit {
    double slope = 0.0;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    const auto n = static_cast<double>(t.size());
    double mt = 0.0, my = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
    }
    const double slope = stt > 0.0 ? sty / stt : 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - (my + slope * (t[i] - mt));
        ss += r * r;
    }
    return {slope, std::sqrt(ss / n)};
}

}  // namespace

PurcellReport purcell_formulas(const ArmParams& params) {
    params.validate();
    const JcAjc c = params.jc_ajc();
    const DerivedDetunings dt = detunings(params);
    const double k = params.kappa;
    const double gj2 = c.g_jc * c.g_jc;
    const double ga2 = c.g_ajc * c.g_ajc;
    PurcellReport r;
    r.gamma_jc = gj2 == 0.0 ? 0.0 : k * gj2 / (dt.delta * dt.delta + k * k + gj2);
    r.gamma_ajc = ga2 == 0.0 ? 0.0 : k * ga2 / (dt.sigma * dt.sigma + k * k + 2.0 * ga2);
    r.gamma_rabi = r.gamma_jc + r.gamma_ajc;
    return r;
}

PurcellFit purcell_numeric(const ArmParams& params, QubitLevel initial) {
    params.validate();
    if (!(params.kappa > 0.0)) throw std::invalid_argument("purcell_numeric: requires kappa > 0");
    const HilbertDims dims = params.dims();
    const auto collapses = standard_collapses(dims, params.kappa, 0.0);
    const Liouvillian l = build_liouvillian(build_hamiltonian(params), collapses, dims);

    const Eigen::VectorXcd rho0 =
        vectorize(DensityMatrix::pure(dims, basis_state(initial, 0, dims)).matrix());
    Operator projector = Operator::Zero(2, 2);
    const auto q = static_cast<Eigen::Index>(initial);
    projector(q, q) = 1.0;
    const Eigen::RowVectorXcd readout = trace_functional(embed(projector, Subsystem::qubit, dims));

    double horizon = 1.0 / (units::two_pi * params.kappa);
    Propagator step(l, horizon / kSamples);
    std::vector<double> times, pops;
    for (int doubling = 0;; ++doubling) {
        times.assign(1, 0.0);
        pops.assign(1, 1.0);
        Eigen::VectorXcd v = rho0;
        for (int k = 1; k <= kSamples; ++k) {
            v = step.apply(v);
            times.push_back(step.dt() * k);
            pops.push_back((readout * v)(0).real());
        }
        if (pops.back() < 0.15 || doubling == kMaxDoublings) break;
        horizon *= 2.0;
        step.square();
    }

    std::vector<double> t_fit, y_fit;
    for (std::size_t i = 0; i < pops.size(); ++i) {
        if (pops[i] >= 0.2 && pops[i] <= 0.8) {
            t_fit.push_back(times[i]);
            y_fit.push_back(std::log(pops[i]));
        }
    }
    if (t_fit.size() < 3) {
        t_fit.clear();
        y_fit.clear();
        for (std::size_t i = 0; i < pops.size(); ++i) {
            if (pops[i] > 0.0) {
                t_fit.push_back(times[i]);
                y_fit.push_back(std::log(pops[i]));
            }
        }
    }
    if (t_fit.size() < 3) throw SolverError("purcell_numeric: population vanished before it could be fitted");

    const LineFit fit = fit_line(t_fit, y_fit);
    if (fit.rms > 0.05) {
        throw SolverError("purcell_numeric: decay is not exponential (rms log residual " + std::to_string(fit.rms) +
                          ")");
    }
    return PurcellFit{-fit.slope / units::two_pi, fit.rms, t_fit.size(), horizon};
}

std::vector<PurcellCurveRow> purcell_comparison_curve(std::span<const double> chi_targets, const ArmParams& tmpl,
                                                      PurcellInversion mode) {
    tmpl.validate();
    if (!(tmpl.kappa > 0.0)) throw std::invalid_argument("purcell_comparison_curve: requires kappa > 0");
    const double g_fixed = tmpl.polar().g;
    std::vector<PurcellCurveRow> rows;
    rows.reserve(chi_targets.size());
    for (const double chi : chi_targets) {
        const double x = std::abs(chi);
        if (!(x > 0.0)) throw std::invalid_argument("purcell_comparison_curve: chi targets must be nonzero");
        PurcellCurveRow row;
        row.chi = chi;
        ArmParams jc = tmpl;
        ArmParams ajc = tmpl;
        bool jc_ok = false;
        bool ajc_ok = false;
        if (mode == PurcellInversion::sweep_qubit) {
            if (!(g_fixed > 0.0)) throw std::invalid_argument("purcell_comparison_curve: requires g > 0");
            // chi = g^2/Delta with Delta = omega_q - omega_r > 0
            jc = with_polar(tmpl, g_fixed, 0.0);
            jc.omega_q = tmpl.omega_r + g_fixed * g_fixed / x;
            jc_ok = true;
            // |chi| = g^2/Sigma with Sigma = omega_q + omega_r
            const double omega_q = g_fixed * g_fixed / x - tmpl.omega_r;
            if (omega_q > 0.0) {
                ajc = with_polar(tmpl, g_fixed, std::numbers::pi / 2);
                ajc.omega_q = omega_q;
                ajc_ok = true;
            }
        } else {
            const DerivedDetunings dt = detunings(tmpl);
            if (dt.delta != 0.0) {
                jc = with_polar(tmpl, std::sqrt(x * std::abs(dt.delta)), 0.0);
                jc_ok = true;
            }
            ajc = with_polar(tmpl, std::sqrt(x * dt.sigma), std::numbers::pi / 2);
            ajc_ok = true;
        }
        if (jc_ok) {
            row.gamma_jc_over_kappa = purcell_formulas(jc).gamma_jc / tmpl.kappa;
            row.omega_q_jc = jc.omega_q;
            row.g_jc = jc.jc_ajc().g_jc;
        }
        if (ajc_ok) {
            row.gamma_ajc_over_kappa = purcell_formulas(ajc).gamma_ajc / tmpl.kappa;
            row.omega_q_ajc = ajc.omega_q;
            row.g_ajc = ajc.jc_ajc().g_ajc;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace armsim
