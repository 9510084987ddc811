#include <algorithm>
#include <cmath>
#include <string>

#include "armsim/errors.hpp"
#include "armsim/lindblad.hpp"
#include "armsim/units.hpp"

namespace armsim {

using cd = std::complex<double>;

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (difference between the 5th and embedded 4th order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class MasterEquationRhs {
public:
    MasterEquationRhs(const Liouvillian& l0, const std::optional<ProbeDrive>& drive) : l0_(l0.matrix) {
        if (drive) {
            lv_ = commutator_superoperator(drive->op);
            amplitude_ = 2.0 * drive->eps_p;
            omega_ = units::two_pi * drive->omega_p;
        }
    }

    void operator()(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const {
        dy.noalias() = l0_ * y;
        if (amplitude_ != 0.0) dy += (amplitude_ * std::cos(omega_ * t)) * (lv_ * y);
    }

private:
    const SparseMatrix& l0_;
    SparseMatrix lv_;
    double amplitude_ = 0.0;
    double omega_ = 0.0;
};

void symmetrize(Eigen::VectorXcd& y, int d) {
    Eigen::Map<Eigen::MatrixXcd> m(y.data(), d, d);
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    m = herm;
}

}  // namespace

Trajectory evolve(const Operator& h_static, const std::optional<ProbeDrive>& drive,
                  std::span<const CollapseChannel> collapses, const DensityMatrix& rho0, double t_final,
                  double dt_hint, const EvolveOptions& options) {
    if (!(t_final > 0.0)) throw std::invalid_argument("evolve: t_final must be > 0");
    if (!(dt_hint > 0.0)) throw std::invalid_argument("evolve: dt_hint must be > 0");
    if (options.record_interval < 0.0) throw std::invalid_argument("evolve: record_interval must be >= 0");
    rho0.validate();

    const HilbertDims dims = rho0.dims();
    const int d = dims.total_dim();
    const Liouvillian l0 = build_liouvillian(h_static, collapses, dims);
    if (drive && (drive->op.rows() != d || hermiticity_error(drive->op) > 1e-12)) {
        throw std::invalid_argument("evolve: drive operator must be Hermitian on the composite space");
    }
    const MasterEquationRhs rhs(l0, drive);

    std::vector<Eigen::RowVectorXcd> readouts;
    for (const auto& op : options.observables) readouts.push_back(trace_functional(op));
    const Eigen::RowVectorXcd trace_row = trace_functional(identity(d));

    Trajectory traj;
    auto record = [&](double t, const Eigen::VectorXcd& y) {
        const double drift = std::abs((trace_row * y)(0) - cd(1.0, 0.0));
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        if (drift > 1e-8) {
            throw SolverError("evolve: trace drift " + std::to_string(drift) + " at t = " + std::to_string(t) + " ns");
        }
        if (options.check_positivity || options.store_states) {
            DensityMatrix state(dims, unvectorize(y, d));
            if (options.check_positivity) {
                const double lmin = state.min_eigenvalue();
                traj.min_eigenvalue = std::min(traj.min_eigenvalue, lmin);
                if (lmin < -1e-8) {
                    throw SolverError("evolve: negative eigenvalue " + std::to_string(lmin) + " at t = " +
                                      std::to_string(t) + " ns");
                }
            }
            if (options.store_states) traj.states.push_back(std::move(state));
        }
        traj.times.push_back(t);
        std::vector<cd> values;
        values.reserve(readouts.size());
        for (const auto& r : readouts) values.push_back((r * y)(0));
        traj.expectations.push_back(std::move(values));
    };

    // Record schedule: multiples of record_interval at or after record_from, and t_final.
    std::vector<double> schedule;
    if (options.record_interval > 0.0) {
        const auto first = static_cast<long long>(std::ceil(options.record_from / options.record_interval - 1e-9));
        for (long long k = std::max(0LL, first);; ++k) {
            const double t = static_cast<double>(k) * options.record_interval;
            if (t >= t_final * (1.0 - 1e-12)) break;
            schedule.push_back(t);
        }
    } else if (options.record_from <= 0.0) {
        schedule.push_back(0.0);
    }
    schedule.push_back(t_final);

    Eigen::VectorXcd y = vectorize(rho0.matrix());
    std::size_t next = 0;
    double t = 0.0;
    if (schedule[next] <= 0.0) {
        record(0.0, y);
        ++next;
    }

    const Eigen::Index n = y.size();
    Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y5(n);
    double h = dt_hint;
    while (next < schedule.size()) {
        const double target = schedule[next];
        const double remaining = target - t;
        bool hits_target = false;
        double step = h;
        if (step >= remaining) {
            step = remaining;
            hits_target = true;
        }
        if (step < options.min_step && !hits_target) {
            throw SolverError("evolve: step size underflow at t = " + std::to_string(t) + " ns");
        }

        rhs(t, y, k1);
        tmp = y + step * (a21 * k1);
        rhs(t + c2 * step, tmp, k2);
        tmp = y + step * (a31 * k1 + a32 * k2);
        rhs(t + c3 * step, tmp, k3);
        tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * step, tmp, k4);
        tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * step, tmp, k5);
        tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + step, tmp, k6);
        y5 = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + step, y5, k7);
        tmp = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double err = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = options.atol + options.rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
            const double r = std::abs(tmp(i)) / sc;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0 || (hits_target && step < options.min_step)) {
            t = hits_target ? target : t + step;
            y = y5;
            symmetrize(y, d);
            ++traj.accepted_steps;
            if (hits_target) {
                record(t, y);
                ++next;
            }
            const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            // A step clipped to land on a record time says nothing about the natural step.
            h = hits_target ? std::max(h, step * grow) : step * grow;
        } else {
            ++traj.rejected_steps;
            h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        }
    }
    return traj;
}

}  // namespace armsim
