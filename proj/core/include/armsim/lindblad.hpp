#pragma once

// Lindblad generator on column-stacked density matrices, steady states,
// linear response to a weak probe, and time evolution.
//
// Conventions: H and all rates in GHz (linear), time in ns. The generator is
//   L rho = -i 2pi [H, rho] + sum_k 2pi r_k (O_k rho O_k^dag - 1/2 {O_k^dag O_k, rho}),
// and vec() stacks columns, so vec(A X B) = (B^T (x) A) vec(X).

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "armsim/operators.hpp"

namespace armsim {

using SparseMatrix = Eigen::SparseMatrix<std::complex<double>>;

struct CollapseChannel {
    Operator op;
    double rate = 0.0;  // GHz
};

class DensityMatrix {
public:
    DensityMatrix(HilbertDims dims, Eigen::MatrixXcd rho);

    static DensityMatrix pure(const HilbertDims& dims, const StateVector& psi);

    const HilbertDims& dims() const { return dims_; }
    const Eigen::MatrixXcd& matrix() const { return rho_; }

    std::complex<double> expect(const Operator& op) const { return (op * rho_).trace(); }
    double trace_error() const;
    double hermiticity_error() const;
    double min_eigenvalue() const;

    /// Throws SolverError unless Hermitian within 1e-10, unit trace within
    /// 1e-9 and min eigenvalue > -1e-8.
    void validate() const;

private:
    HilbertDims dims_;
    Eigen::MatrixXcd rho_;
};

struct Liouvillian {
    HilbertDims dims;
    SparseMatrix matrix;  // side total_dim^2, explicit (possibly zero) diagonal
};

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim);

/// Row vector r with r . vec(X) = Tr(op X).
Eigen::RowVectorXcd trace_functional(const Operator& op);

/// Superoperator X -> -i 2pi [V, X].
SparseMatrix commutator_superoperator(const Operator& v);

Liouvillian build_liouvillian(const Operator& h, std::span<const CollapseChannel> collapses,
                              const HilbertDims& dims);

/// Cavity decay kappa D[a] and qubit relaxation gamma D[sigma_-]; channels with
/// zero rate are omitted.
std::vector<CollapseChannel> standard_collapses(const HilbertDims& dims, double kappa, double gamma);

/// Unique stationary state via sparse LU on the generator with its first row
/// replaced by the trace constraint. Throws SolverError for degenerate or
/// singular problems.
DensityMatrix steady_state(const Liouvillian& l);

enum class ReferenceKind {
    stationary,   // reference must satisfy |L vec(rho)| < 1e-9
    conditioned,  // reference is a prepared state (e.g. a dressed eigenstate)
};

/// Complex amplitude A(omega_p) of <observe> at e^{-i 2pi omega_p t} per unit
/// probe amplitude eps_p, for the drive eps_p V (e^{-i 2pi omega_p t} + c.c.).
/// The counter-rotating half of the probe is dropped. Solves
///   (L + i 2pi omega_p) x = i 2pi vec([V, rho_ref]),  A = Tr(observe x).
/// Reuses the sparsity analysis across probe frequencies; one instance per
/// thread.
class ResponseSolver {
public:
    ResponseSolver(const Liouvillian& l, const DensityMatrix& reference, const Operator& drive,
                   const Operator& observe, ReferenceKind kind = ReferenceKind::stationary);

    std::complex<double> operator()(double omega_p);

private:
    SparseMatrix shifted_;
    std::vector<Eigen::Index> diagonal_slots_;  // positions of (k, k) in valuePtr()
    std::vector<std::complex<double>> base_diagonal_;
    Eigen::VectorXcd source_;
    Eigen::RowVectorXcd readout_;
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

std::complex<double> linear_response(const Liouvillian& l, const DensityMatrix& reference, const Operator& drive,
                                     const Operator& observe, double omega_p,
                                     ReferenceKind kind = ReferenceKind::stationary);

// ---------------------------------------------------------------------------
// Time domain

struct ProbeDrive {
    Operator op;           // V; the Hamiltonian term is 2 eps_p V cos(2pi omega_p t)
    double eps_p = 0.0;    // GHz
    double omega_p = 0.0;  // GHz
};

struct EvolveOptions {
    double atol = 1e-10;
    double rtol = 1e-8;
    double record_interval = 0.0;  // ns; 0 records only t = 0 and t_final
    double record_from = 0.0;      // ns; skip records before this time
    double min_step = 1e-12;       // ns
    std::vector<Operator> observables;
    bool store_states = false;
    bool check_positivity = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<std::complex<double>>> expectations;  // [record][observable]
    std::vector<DensityMatrix> states;
    double max_trace_drift = 0.0;
    double min_eigenvalue = 1.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of the master equation. The state
/// is re-symmetrized after every accepted step; trace drift beyond 1e-8 or a
/// recorded eigenvalue below -1e-8 raises SolverError.
Trajectory evolve(const Operator& h_static, const std::optional<ProbeDrive>& drive,
                  std::span<const CollapseChannel> collapses, const DensityMatrix& rho0, double t_final,
                  double dt_hint, const EvolveOptions& options = {});

/// Exact propagator exp(L dt) for a time-independent generator (dense; for
/// small truncations and long horizons).
class Propagator {
public:
    Propagator(const Liouvillian& l, double dt);

    double dt() const { return dt_; }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return step_ * v; }
    /// exp(L 2dt): doubles the step in place.
    void square();

private:
    double dt_;
    Eigen::MatrixXcd step_;
};

}  // namespace armsim
