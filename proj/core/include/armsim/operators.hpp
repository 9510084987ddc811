#pragma once

// Truncated operator algebra on the composite qubit (x) resonator space.
//
// Basis conventions, fixed for the whole library:
//   * qubit basis {|g>, |e>} with sigma_z |g> = +|g>, sigma_+ |g> = |e>;
//   * resonator Fock basis {|0>, ..., |n_max>};
//   * composite index = qubit_index * (n_max + 1) + fock_index
//     (qubit is the left Kronecker factor).

#include <cstddef>

#include <Eigen/Dense>

namespace armsim {

using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

class HilbertDims {
public:
    static constexpr int qubit_dim = 2;

    explicit HilbertDims(int n_max);

    int n_max() const { return n_max_; }
    int resonator_dim() const { return n_max_ + 1; }
    int total_dim() const { return qubit_dim * (n_max_ + 1); }

    friend bool operator==(const HilbertDims&, const HilbertDims&) = default;

private:
    int n_max_;
};

enum class PauliAxis { x, y, z, plus, minus };
enum class Subsystem { qubit, resonator };
enum class QubitLevel { ground = 0, excited = 1 };

Operator identity(int dim);

/// Truncated ladder operator: <n-1|a|n> = sqrt(n) for n = 1..n_max.
Operator annihilation(int n_max);
Operator creation(int n_max);
Operator number(int n_max);

Operator pauli(PauliAxis axis);

/// Kronecker product A (x) B; A is the slow (outer) index.
Operator tensor(const Operator& a, const Operator& b);

/// Lift a single-subsystem operator to the composite space.
Operator embed(const Operator& op, Subsystem subsystem, const HilbertDims& dims);

Operator commutator(const Operator& a, const Operator& b);

/// max |H - H^dagger| over all entries.
double hermiticity_error(const Operator& h);

std::size_t composite_index(QubitLevel qubit, int fock, const HilbertDims& dims);
StateVector basis_state(QubitLevel qubit, int fock, const HilbertDims& dims);

}  // namespace armsim
