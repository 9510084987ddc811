#include "armsim/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace armsim {

using cd = std::complex<double>;

HilbertDims::HilbertDims(int n_max) : n_max_(n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("HilbertDims: n_max must be >= 1, got " + std::to_string(n_max));
    }
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator annihilation(int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("annihilation: n_max must be >= 1, got " + std::to_string(n_max));
    }
    Operator a = Operator::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Operator creation(int n_max) { return annihilation(n_max).adjoint(); }

Operator number(int n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("number: n_max must be >= 1, got " + std::to_string(n_max));
    }
    Operator n = Operator::Zero(n_max + 1, n_max + 1);
    for (int k = 0; k <= n_max; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Operator pauli(PauliAxis axis) {
    const cd i{0.0, 1.0};
    Operator s = Operator::Zero(2, 2);
    switch (axis) {
        case PauliAxis::x:
            s << 0.0, 1.0, 1.0, 0.0;
            break;
        case PauliAxis::y:
            s << 0.0, -i, i, 0.0;
            break;
        case PauliAxis::z:
            s << 1.0, 0.0, 0.0, -1.0;
            break;
        case PauliAxis::plus:  // |e><g|
            s(1, 0) = 1.0;
            break;
        case PauliAxis::minus:  // |g><e|
            s(0, 1) = 1.0;
            break;
    }
    return s;
}

Operator tensor(const Operator& a, const Operator& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw std::invalid_argument("tensor: factors must be square");
    }
    return Eigen::kroneckerProduct(a, b).eval();
}

Operator embed(const Operator& op, Subsystem subsystem, const HilbertDims& dims) {
    const int expected = subsystem == Subsystem::qubit ? HilbertDims::qubit_dim : dims.resonator_dim();
    if (op.rows() != expected || op.cols() != expected) {
        throw std::invalid_argument("embed: operator is " + std::to_string(op.rows()) + "x" +
                                    std::to_string(op.cols()) + ", subsystem expects dimension " +
                                    std::to_string(expected));
    }
    if (subsystem == Subsystem::qubit) return tensor(op, identity(dims.resonator_dim()));
    return tensor(identity(HilbertDims::qubit_dim), op);
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double hermiticity_error(const Operator& h) {
    if (h.size() == 0) return 0.0;
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

std::size_t composite_index(QubitLevel qubit, int fock, const HilbertDims& dims) {
    if (fock < 0 || fock > dims.n_max()) {
        throw std::out_of_range("composite_index: Fock level " + std::to_string(fock) + " outside [0, " +
                                std::to_string(dims.n_max()) + "]");
    }
    return static_cast<std::size_t>(static_cast<int>(qubit) * dims.resonator_dim() + fock);
}

StateVector basis_state(QubitLevel qubit, int fock, const HilbertDims& dims) {
    StateVector v = StateVector::Zero(dims.total_dim());
    v(static_cast<Eigen::Index>(composite_index(qubit, fock, dims))) = 1.0;
    return v;
}

}  // namespace armsim
