#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "armsim/arm_model.hpp"
#include "armsim/errors.hpp"
#include "armsim/lindblad.hpp"
#include "armsim/units.hpp"

using namespace armsim;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd random_density(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cd(n(rng), n(rng));
    Eigen::MatrixXcd rho = a * a.adjoint();
    return rho / rho.trace();
}

ArmParams params(double wq, double g, double theta, double kappa, double gamma, int n_max) {
    ArmParams p;
    p.omega_r = 5.0;
    p.omega_q = wq;
    p.coupling = Polar{g, theta};
    p.kappa = kappa;
    p.gamma = gamma;
    p.n_max = n_max;
    return p;
}

Liouvillian liouvillian(const ArmParams& p) {
    return build_liouvillian(build_hamiltonian(p), standard_collapses(p.dims(), p.kappa, p.gamma), p.dims());
}

}  // namespace

TEST_CASE("column-stacking conventions") {
    std::mt19937_64 rng(7);
    const Eigen::MatrixXcd a = random_density(3, rng), b = random_density(3, rng), x = random_density(3, rng);
    const Eigen::MatrixXcd round = unvectorize(vectorize(x), 3);
    CHECK((round - x).cwiseAbs().maxCoeff() == 0.0);
    CHECK(vectorize(x)(1) == x(1, 0));

    const Eigen::MatrixXcd axb = a * x * b;
    const Eigen::MatrixXcd super = tensor(b.transpose(), a);
    CHECK((super * vectorize(x) - vectorize(axb)).cwiseAbs().maxCoeff() < 1e-14);

    const cd tr = (trace_functional(a) * vectorize(x))(0);
    CHECK(std::abs(tr - (a * x).trace()) < 1e-14);

    const Eigen::VectorXcd c = commutator_superoperator(a) * vectorize(x);
    const Eigen::MatrixXcd expected = cd(0, -units::two_pi) * (a * x - x * a);
    CHECK((unvectorize(c, 3) - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("generator preserves trace and Hermiticity") {
    const ArmParams p = params(5.3, 0.1, 0.6, 2e-3, 1e-3, 4);
    const Liouvillian l = liouvillian(p);
    const int d = p.dims().total_dim();
    const Eigen::RowVectorXcd tr = trace_functional(identity(d));
    const Eigen::RowVectorXcd leak = tr * l.matrix;
    CHECK(leak.cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(11);
    const Eigen::MatrixXcd rho = random_density(d, rng);
    const Eigen::MatrixXcd drho = unvectorize(l.matrix * vectorize(rho), d);
    CHECK(hermiticity_error(drho) < 1e-12);
    CHECK(std::abs(drho.trace()) < 1e-12);
}

TEST_CASE("single photon decays at 2 pi kappa") {
    const double kappa = 2e-3;
    const ArmParams p = params(5.0, 0.0, 0.0, kappa, 0.0, 3);
    const Liouvillian l = liouvillian(p);
    const HilbertDims d = p.dims();
    const DensityMatrix one = DensityMatrix::pure(d, basis_state(QubitLevel::ground, 1, d));
    const Eigen::VectorXcd drho = l.matrix * vectorize(one.matrix());
    const Operator n = embed(number(3), Subsystem::resonator, d);
    const cd dn = (trace_functional(n) * drho)(0);
    CHECK(dn.real() == doctest::Approx(-units::two_pi * kappa).epsilon(1e-12));

    const double t = 100.0;
    const Propagator prop(l, t);
    const Eigen::VectorXcd later = prop.apply(vectorize(one.matrix()));
    const cd n_t = (trace_functional(n) * later)(0);
    CHECK(n_t.real() == doctest::Approx(std::exp(-units::two_pi * kappa * t)).epsilon(1e-10));
}

TEST_CASE("build_liouvillian input checks") {
    const HilbertDims d(2);
    Operator h = Operator::Zero(6, 6);
    h(0, 1) = 1.0;  // not Hermitian
    CHECK_THROWS_AS(build_liouvillian(h, {}, d), std::invalid_argument);
    const std::vector<CollapseChannel> bad{{identity(6), -1.0}};
    CHECK_THROWS_AS(build_liouvillian(Operator::Zero(6, 6), bad, d), std::invalid_argument);
    CHECK_THROWS_AS(build_liouvillian(Operator::Zero(4, 4), {}, d), std::invalid_argument);
}

TEST_CASE("steady states") {
    SUBCASE("loss drives the undriven system to |g,0>") {
        const ArmParams p = params(5.2, 0.1, 0.0, 1e-3, 1e-3, 5);
        const DensityMatrix ss = steady_state(liouvillian(p));
        const auto i0 = static_cast<Eigen::Index>(composite_index(QubitLevel::ground, 0, p.dims()));
        CHECK(ss.matrix()(i0, i0).real() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(ss.trace_error() < 1e-12);
    }
    SUBCASE("counter-rotating coupling without qubit decay traps |e,0>") {
        // Both a^dag sigma_+ and a sigma_- annihilate |e,0>, and so does a: the
        // state is stationary and dark, and with gamma = 0 it collects everything.
        const ArmParams p = params(5.0, 0.1, units::pi / 2, 1e-3, 0.0, 5);
        const DensityMatrix ss = steady_state(liouvillian(p));
        const auto i = static_cast<Eigen::Index>(composite_index(QubitLevel::excited, 0, p.dims()));
        CHECK(ss.matrix()(i, i).real() == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("unitary generator is rejected") {
        const ArmParams p = params(5.0, 0.1, 0.0, 0.0, 0.0, 3);
        CHECK_THROWS_AS(steady_state(liouvillian(p)), SolverError);
    }
    SUBCASE("decoupled lossless qubit leaves a degenerate null space") {
        const ArmParams p = params(5.0, 0.0, 0.0, 1e-3, 0.0, 3);
        CHECK_THROWS_AS(steady_state(liouvillian(p)), SolverError);
    }
}

TEST_CASE("bare cavity resolvent matches the Lorentzian") {
    const double kappa = 1e-3;
    const ArmParams p = params(5.0, 0.0, 0.0, kappa, 1e-3, 4);
    const Liouvillian l = liouvillian(p);
    const DensityMatrix ss = steady_state(l);
    const Operator a = embed(annihilation(4), Subsystem::resonator, p.dims());
    ResponseSolver solver(l, ss, drive_operator(p.dims()), a);

    // Frozen value from the independent dense oracle (tests/oracles/oracles.py).
    const cd frozen(882.3529411767322, -1470.5882352936273);
    CHECK(std::abs(solver(5.0003) - frozen) / std::abs(frozen) < 1e-9);

    for (double wp : {4.99, 4.9995, 5.0, 5.0001, 5.02}) {
        const cd analytic = cd(0, -units::two_pi) / cd(units::pi * kappa, units::two_pi * (5.0 - wp));
        CHECK(std::abs(solver(wp) - analytic) / std::abs(analytic) < 1e-6);
    }
}

TEST_CASE("response solver reference checks") {
    const ArmParams p = params(5.0, 0.1, 0.0, 1e-3, 1e-3, 3);
    const Liouvillian l = liouvillian(p);
    const DensityMatrix excited = DensityMatrix::pure(p.dims(), basis_state(QubitLevel::excited, 0, p.dims()));
    const Operator a = embed(annihilation(3), Subsystem::resonator, p.dims());
    CHECK_THROWS_AS(ResponseSolver(l, excited, drive_operator(p.dims()), a, ReferenceKind::stationary),
                    std::invalid_argument);
    CHECK_NOTHROW(ResponseSolver(l, excited, drive_operator(p.dims()), a, ReferenceKind::conditioned));
}

TEST_CASE("DensityMatrix validation") {
    const HilbertDims d(1);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = 1.0;
    CHECK_NOTHROW(DensityMatrix(d, rho).validate());
    rho(0, 0) = 0.9;
    CHECK_THROWS_AS(DensityMatrix(d, rho).validate(), SolverError);
    rho(0, 0) = 1.1;
    rho(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityMatrix(d, rho).validate(), SolverError);
    rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(0, 0) = 1.0;
    rho(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(d, rho).validate(), SolverError);
    CHECK(DensityMatrix::pure(d, basis_state(QubitLevel::ground, 1, d)).expect(identity(4)) == cd(1.0));
}
