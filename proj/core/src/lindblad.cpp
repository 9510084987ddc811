#include "armsim/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "armsim/errors.hpp"
#include "armsim/units.hpp"

namespace armsim {

using cd = std::complex<double>;

namespace {

SparseMatrix to_sparse(const Eigen::MatrixXcd& m) {
    return m.sparseView(0.0, 0.0);  // drops exact zeros only
}

SparseMatrix sparse_identity(int dim) {
    SparseMatrix id(dim, dim);
    id.setIdentity();
    return id;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out;
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

// Superoperators of left and right multiplication on column-stacked vectors.
SparseMatrix left_multiply(const SparseMatrix& a, const SparseMatrix& id) { return kron(id, a); }
SparseMatrix right_multiply(const SparseMatrix& a, const SparseMatrix& id) {
    return kron(SparseMatrix(a.transpose()), id);
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(HilbertDims dims, Eigen::MatrixXcd rho) : dims_(dims), rho_(std::move(rho)) {
    if (rho_.rows() != dims_.total_dim() || rho_.cols() != dims_.total_dim()) {
        throw std::invalid_argument("DensityMatrix: matrix side " + std::to_string(rho_.rows()) +
                                    " does not match total dimension " + std::to_string(dims_.total_dim()));
    }
}

DensityMatrix DensityMatrix::pure(const HilbertDims& dims, const StateVector& psi) {
    const StateVector n = psi / psi.norm();
    return DensityMatrix(dims, n * n.adjoint());
}

double DensityMatrix::trace_error() const { return std::abs(rho_.trace() - cd(1.0, 0.0)); }

double DensityMatrix::hermiticity_error() const { return armsim::hermiticity_error(rho_); }

double DensityMatrix::min_eigenvalue() const {
    const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
    if (hermiticity_error() > 1e-10) {
        throw SolverError("density matrix not Hermitian (error " + std::to_string(hermiticity_error()) + ")");
    }
    if (trace_error() > 1e-9) {
        throw SolverError("density matrix trace deviates from 1 by " + std::to_string(trace_error()));
    }
    const double lmin = min_eigenvalue();
    if (lmin < -1e-8) {
        throw SolverError("density matrix has negative eigenvalue " + std::to_string(lmin));
    }
}

// ---------------------------------------------------------------------------
// Vectorization

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
        throw std::invalid_argument("unvectorize: length does not match dim^2");
    }
    return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

Eigen::RowVectorXcd trace_functional(const Operator& op) {
    // Tr(op X) = sum_ij op_ji X_ij = vec(op^T) . vec(X)
    const Eigen::MatrixXcd t = op.transpose();
    return Eigen::Map<const Eigen::RowVectorXcd>(t.data(), t.size());
}

SparseMatrix commutator_superoperator(const Operator& v) {
    const int d = static_cast<int>(v.rows());
    const SparseMatrix id = sparse_identity(d);
    const SparseMatrix vs = to_sparse(v);
    SparseMatrix out = left_multiply(vs, id) - right_multiply(vs, id);
    out *= cd(0.0, -units::two_pi);
    return out;
}

Liouvillian build_liouvillian(const Operator& h, std::span<const CollapseChannel> collapses,
                              const HilbertDims& dims) {
    const int d = dims.total_dim();
    if (h.rows() != d || h.cols() != d) {
        throw std::invalid_argument("build_liouvillian: Hamiltonian dimension does not match HilbertDims");
    }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (hermiticity_error(h) > 1e-12 * scale) {
        throw std::invalid_argument("build_liouvillian: Hamiltonian is not Hermitian (error " +
                                    std::to_string(hermiticity_error(h)) + ")");
    }

    const SparseMatrix id = sparse_identity(d);
    SparseMatrix l = commutator_superoperator(h);
    for (const auto& c : collapses) {
        if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
            throw std::invalid_argument("build_liouvillian: collapse rate must be >= 0, got " + std::to_string(c.rate));
        }
        if (c.op.rows() != d || c.op.cols() != d) {
            throw std::invalid_argument("build_liouvillian: collapse operator dimension mismatch");
        }
        if (c.rate == 0.0) continue;
        const SparseMatrix o = to_sparse(c.op);
        const SparseMatrix o_conj = to_sparse(c.op.conjugate());
        const SparseMatrix odo = to_sparse(c.op.adjoint() * c.op);
        SparseMatrix term = kron(o_conj, o) - 0.5 * left_multiply(odo, id) - 0.5 * right_multiply(odo, id);
        l += (units::two_pi * c.rate) * term;
    }
    // Explicit diagonal so that L + i w I keeps the same sparsity pattern.
    SparseMatrix zero_diag(d * d, d * d);
    zero_diag.setIdentity();
    zero_diag *= cd(0.0, 0.0);
    l += zero_diag;
    l.makeCompressed();
    return Liouvillian{dims, std::move(l)};
}

std::vector<CollapseChannel> standard_collapses(const HilbertDims& dims, double kappa, double gamma) {
    std::vector<CollapseChannel> out;
    if (kappa > 0.0) out.push_back({embed(annihilation(dims.n_max()), Subsystem::resonator, dims), kappa});
    if (gamma > 0.0) out.push_back({embed(pauli(PauliAxis::minus), Subsystem::qubit, dims), gamma});
    if (kappa < 0.0 || gamma < 0.0) throw std::invalid_argument("standard_collapses: rates must be >= 0");
    return out;
}

// ---------------------------------------------------------------------------
// Steady state

DensityMatrix steady_state(const Liouvillian& l) {
    const int d = l.dims.total_dim();
    const Eigen::Index n = l.matrix.rows();

    // A generator without any dissipative part cannot single out one state.
    bool dissipative = false;
    {
        const SparseMatrix adj = l.matrix.adjoint();
        const SparseMatrix anti = l.matrix + adj;  // zero iff purely unitary
        for (Eigen::Index k = 0; k < anti.outerSize() && !dissipative; ++k) {
            for (SparseMatrix::InnerIterator it(anti, k); it; ++it) {
                if (std::abs(it.value()) > 1e-14) {
                    dissipative = true;
                    break;
                }
            }
        }
    }
    if (!dissipative) {
        throw SolverError("steady_state: generator is unitary, null space has dimension >= " + std::to_string(d));
    }

    std::vector<Eigen::Triplet<cd>> triplets;
    triplets.reserve(static_cast<std::size_t>(l.matrix.nonZeros()) + static_cast<std::size_t>(d));
    for (Eigen::Index k = 0; k < l.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(l.matrix, k); it; ++it) {
            if (it.row() != 0) triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int i = 0; i < d; ++i) triplets.emplace_back(0, i + i * d, cd(1.0, 0.0));
    SparseMatrix bordered(n, n);
    bordered.setFromTriplets(triplets.begin(), triplets.end());
    bordered.makeCompressed();

    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(bordered);
    lu.factorize(bordered);
    if (lu.info() != Eigen::Success) {
        throw SolverError("steady_state: bordered system is singular (degenerate null space?): " + lu.lastErrorMessage());
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
    rhs(0) = 1.0;
    Eigen::VectorXcd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw SolverError("steady_state: solve failed");
    }

    const double residual = (l.matrix * x).norm();
    if (residual > 1e-10) {
        throw SolverError("steady_state: residual " + std::to_string(residual) +
                          " exceeds 1e-10 (degenerate or ill-conditioned null space)");
    }
    Eigen::MatrixXcd rho = unvectorize(x, d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    DensityMatrix out(l.dims, std::move(rho));
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Linear response

ResponseSolver::ResponseSolver(const Liouvillian& l, const DensityMatrix& reference, const Operator& drive,
                               const Operator& observe, ReferenceKind kind)
    : shifted_(l.matrix) {
    const int d = l.dims.total_dim();
    if (!(reference.dims() == l.dims) || drive.rows() != d || observe.rows() != d) {
        throw std::invalid_argument("ResponseSolver: dimension mismatch");
    }
    const Eigen::VectorXcd rho = vectorize(reference.matrix());
    if (kind == ReferenceKind::stationary) {
        const double residual = (l.matrix * rho).norm();
        if (residual > 1e-9) {
            throw std::invalid_argument("ResponseSolver: reference is not stationary (residual " +
                                        std::to_string(residual) + ")");
        }
    }
    // (L + i w) x = -(-i 2pi [V, rho])
    source_ = -(commutator_superoperator(drive) * rho);
    readout_ = trace_functional(observe);

    shifted_.makeCompressed();
    const Eigen::Index n = shifted_.rows();
    diagonal_slots_.assign(static_cast<std::size_t>(n), -1);
    for (Eigen::Index k = 0; k < shifted_.outerSize(); ++k) {
        for (Eigen::Index p = shifted_.outerIndexPtr()[k]; p < shifted_.outerIndexPtr()[k + 1]; ++p) {
            if (shifted_.innerIndexPtr()[p] == k) diagonal_slots_[static_cast<std::size_t>(k)] = p;
        }
    }
    base_diagonal_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index slot = diagonal_slots_[static_cast<std::size_t>(k)];
        if (slot < 0) throw std::logic_error("ResponseSolver: Liouvillian lacks an explicit diagonal");
        base_diagonal_[static_cast<std::size_t>(k)] = shifted_.valuePtr()[slot];
    }
    lu_.analyzePattern(shifted_);
}

std::complex<double> ResponseSolver::operator()(double omega_p) {
    const cd shift(0.0, units::two_pi * omega_p);
    for (std::size_t k = 0; k < diagonal_slots_.size(); ++k) {
        shifted_.valuePtr()[diagonal_slots_[k]] = base_diagonal_[k] + shift;
    }
    lu_.factorize(shifted_);
    if (lu_.info() != Eigen::Success) {
        throw SolverError("linear_response: singular resolvent at omega_p = " + std::to_string(omega_p) + " GHz");
    }
    const Eigen::VectorXcd x = lu_.solve(source_);
    if (lu_.info() != Eigen::Success || !x.allFinite()) {
        throw SolverError("linear_response: solve failed at omega_p = " + std::to_string(omega_p) + " GHz");
    }
    return readout_ * x;
}

std::complex<double> linear_response(const Liouvillian& l, const DensityMatrix& reference, const Operator& drive,
                                     const Operator& observe, double omega_p, ReferenceKind kind) {
    ResponseSolver solver(l, reference, drive, observe, kind);
    return solver(omega_p);
}

// ---------------------------------------------------------------------------
// Exact propagator

Propagator::Propagator(const Liouvillian& l, double dt) : dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("Propagator: dt must be > 0");
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(l.matrix) * dt;
    step_ = dense.exp();
    if (!step_.allFinite()) throw SolverError("Propagator: matrix exponential overflowed");
}

void Propagator::square() {
    step_ = (step_ * step_).eval();
    dt_ *= 2.0;
}

}  // namespace armsim
