#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "armsim/operators.hpp"

using namespace armsim;
using cd = std::complex<double>;

namespace {

std::vector<double> sorted_real_eigenvalues(const Operator& h) {
    Eigen::SelfAdjointEigenSolver<Operator> es(h);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("HilbertDims sizes and validation") {
    const HilbertDims d(4);
    CHECK(d.resonator_dim() == 5);
    CHECK(d.total_dim() == 10);
    CHECK(HilbertDims::qubit_dim == 2);
    CHECK_THROWS_AS(HilbertDims(0), std::invalid_argument);
}

TEST_CASE("annihilation operator entries") {
    Operator a1(2, 2);
    a1 << 0, 1, 0, 0;
    CHECK(annihilation(1) == a1);

    const Operator a2 = annihilation(2);
    CHECK(a2(0, 1) == cd(1.0));
    CHECK(a2(1, 2) == cd(std::sqrt(2.0)));
    CHECK((a2.cwiseAbs().array() > 0).count() == 2);

    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(3);
    one(1) = 1.0;
    const Eigen::VectorXcd out = a2 * one;
    CHECK(out(0) == cd(1.0));
    CHECK(out.norm() == doctest::Approx(1.0));

    CHECK_THROWS_AS(annihilation(0), std::invalid_argument);
}

TEST_CASE("truncated canonical commutator lives in the top Fock level") {
    for (int n_max : {1, 3, 7}) {
        const Operator a = annihilation(n_max);
        Operator expected = identity(n_max + 1);
        expected(n_max, n_max) -= static_cast<double>(n_max + 1);
        CHECK((commutator(a, creation(n_max)) - expected).cwiseAbs().maxCoeff() < 1e-14);
        const Operator n = number(n_max);
        for (int k = 0; k <= n_max; ++k) CHECK(n(k, k) == cd(k));
        CHECK((creation(n_max) * a - n).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("Pauli algebra and ladder convention") {
    const Operator sx = pauli(PauliAxis::x), sy = pauli(PauliAxis::y), sz = pauli(PauliAxis::z);
    const Operator sp = pauli(PauliAxis::plus), sm = pauli(PauliAxis::minus);
    const cd i(0.0, 1.0);
    CHECK(sz * sz == identity(2));
    CHECK(sp * sm + sm * sp == identity(2));
    CHECK(commutator(sx, sy) == 2.0 * i * sz);
    CHECK(commutator(sy, sz) == 2.0 * i * sx);
    CHECK(commutator(sz, sx) == 2.0 * i * sy);

    // sigma_z |g> = +|g>; sigma_+ |g> = |e>
    Eigen::Vector2cd g(1.0, 0.0), e(0.0, 1.0);
    CHECK(sz * g == g);
    CHECK(sp * g == e);
    CHECK((sm * g).norm() == 0.0);
    CHECK(sp == 0.5 * (sx - i * sy));
}

TEST_CASE("tensor products") {
    CHECK(tensor(identity(2), identity(3)) == identity(6));

    const HilbertDims d(3);
    const Operator za = tensor(pauli(PauliAxis::z), identity(4));
    const Operator ia = tensor(identity(2), annihilation(3));
    CHECK(commutator(za, ia).cwiseAbs().maxCoeff() == 0.0);

    const Operator a = pauli(PauliAxis::x), b = annihilation(2), c = pauli(PauliAxis::y);
    CHECK(tensor(tensor(a, b), c) == tensor(a, tensor(b, c)));

    Operator p = Operator::Zero(2, 2), q = Operator::Zero(2, 2);
    p.diagonal() << 2.0, 3.0;
    q.diagonal() << 5.0, 7.0;
    const auto ev = sorted_real_eigenvalues(tensor(p, q));
    CHECK(ev == std::vector<double>{10.0, 14.0, 15.0, 21.0});
}

TEST_CASE("embed lifts single-subsystem operators") {
    const HilbertDims d(4);
    const auto z = sorted_real_eigenvalues(embed(pauli(PauliAxis::z), Subsystem::qubit, d));
    CHECK(std::count(z.begin(), z.end(), -1.0) == 5);
    CHECK(std::count(z.begin(), z.end(), 1.0) == 5);

    const auto n = sorted_real_eigenvalues(embed(number(4), Subsystem::resonator, d));
    for (int k = 0; k <= 4; ++k) CHECK(std::count_if(n.begin(), n.end(), [k](double v) {
                                           return std::abs(v - k) < 1e-12;
                                       }) == 2);

    CHECK(embed(pauli(PauliAxis::x), Subsystem::qubit, d) * embed(annihilation(4), Subsystem::resonator, d) ==
          tensor(pauli(PauliAxis::x), annihilation(4)));
    CHECK_THROWS_AS(embed(annihilation(3), Subsystem::resonator, d), std::invalid_argument);
    CHECK_THROWS_AS(embed(identity(3), Subsystem::qubit, d), std::invalid_argument);
}

TEST_CASE("composite indexing puts the qubit first") {
    const HilbertDims d(5);
    CHECK(composite_index(QubitLevel::ground, 0, d) == 0);
    CHECK(composite_index(QubitLevel::ground, 5, d) == 5);
    CHECK(composite_index(QubitLevel::excited, 0, d) == 6);
    CHECK(composite_index(QubitLevel::excited, 2, d) == 8);
    const StateVector e1 = basis_state(QubitLevel::excited, 1, d);
    CHECK(e1(7) == cd(1.0));
    CHECK(e1.norm() == 1.0);
    CHECK_THROWS(composite_index(QubitLevel::ground, 6, d));
}

TEST_CASE("hermiticity error") {
    Operator h = pauli(PauliAxis::y);
    CHECK(hermiticity_error(h) == 0.0);
    h(0, 1) += 1e-3;
    CHECK(hermiticity_error(h) == doctest::Approx(1e-3));
}
