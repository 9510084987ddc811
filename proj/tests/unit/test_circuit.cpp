#include <doctest.h>

#include <cmath>
#include <random>

#include "armsim/circuit.hpp"
#include "armsim/errors.hpp"
#include "armsim/units.hpp"

using namespace armsim;

namespace {

CircuitParams realistic() {
    CircuitParams c;
    c.c_per_len = 1.6e-10;
    c.l_per_len = 4.2e-7;
    c.length = 0.0122;
    c.c_g = 5e-15;
    c.c_q = 80e-15;
    c.l_q = 20e-9;
    c.e_j = 10.0;
    c.i_c = 20e-9;
    c.m = 50e-12;
    c.x_c = 0.0061;
    c.x_m = 0.0;
    return c;
}

}  // namespace

TEST_CASE("mode functions are normalized and have the right parity") {
    const double l = 0.01;
    for (int n : {1, 2, 3}) {
        // Simpson quadrature of f_n^2 over [-l/2, l/2]
        const int steps = 2000;
        const double h = l / steps;
        double acc = 0.0;
        for (int i = 0; i <= steps; ++i) {
            const double x = -l / 2 + i * h;
            const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            acc += w * std::pow(mode_function(n, l, x), 2);
        }
        CHECK(acc * h / 3.0 == doctest::Approx(1.0).epsilon(1e-10));

        const double x = 0.0013, dx = 1e-7;
        const double fd = (mode_function(n, l, x + dx) - mode_function(n, l, x - dx)) / (2 * dx);
        CHECK(mode_function_derivative(n, l, x) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK(mode_function(1, l, 0.004) == -mode_function(1, l, -0.004));
    CHECK(mode_function(2, l, 0.004) == mode_function(2, l, -0.004));
    CHECK(mode_function(1, l, 0.0) == 0.0);
    CHECK_THROWS_AS(mode_function(0, l, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(mode_function(1, l, 0.006), std::invalid_argument);
    CHECK(wavenumber(2, l) == doctest::Approx(2 * units::pi / l));
}

TEST_CASE("charging energies: decoupling and node limits") {
    constexpr double e = units::elementary_charge;
    CircuitParams c = realistic();
    c.c_g = 0.0;
    EnergyCoefficients en = charging_energies(c);
    CHECK(en.e_cqr == 0.0);
    CHECK(en.e_cq == doctest::Approx(e * e / (2 * c.c_q)).epsilon(1e-12));
    CHECK(en.c_0 == c.c_per_len);
    CHECK(en.l_0 == c.l_per_len);
    CHECK(en.e_lr == doctest::Approx(1.0 / (2 * c.l_per_len)));
    CHECK(en.e_lq == doctest::Approx(1.0 / (2 * c.l_q)));

    c = realistic();
    c.x_c = 0.0;  // voltage node of the fundamental
    en = charging_energies(c);
    const double c0_cs = c.c_per_len * (c.c_g + c.c_q);
    CHECK(en.e_cqr == doctest::Approx(e * e * c.c_g * (2 * c0_cs) / (2 * c0_cs * c0_cs)).epsilon(1e-12));
}

TEST_CASE("charging energies form a positive definite quadratic form over a random sample") {
    std::mt19937_64 rng(20240611);
    auto log_uniform = [&](double lo, double hi) {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng));
    };
    for (int trial = 0; trial < 500; ++trial) {
        CircuitParams c = realistic();
        c.c_per_len = log_uniform(5e-11, 5e-10);
        c.c_g = log_uniform(1e-16, 5e-14);
        c.c_q = log_uniform(1e-14, 5e-13);
        c.length = log_uniform(2e-3, 3e-2);
        c.x_c = std::uniform_real_distribution<double>(-c.length / 2, c.length / 2)(rng);
        const EnergyCoefficients en = charging_energies(c);
        CHECK(en.e_cq > 0.0);
        CHECK(en.e_cr > 0.0);
        CHECK(en.e_cqr > 0.0);
        CHECK(en.e_cqr * en.e_cqr < 4.0 * en.e_cq * en.e_cr);
    }
}

TEST_CASE("uncoupled mode frequencies") {
    CircuitParams c = realistic();
    c.c_g = 0.0;
    c.e_j = 0.0;
    const DerivedModel m = derive_model(c);
    const double v_p = 1.0 / std::sqrt(c.l_per_len * c.c_per_len);
    CHECK(m.omega_r == doctest::Approx(v_p / (2 * c.length) * 1e-9).epsilon(1e-12));
    CHECK(m.omega_q == doctest::Approx(1.0 / (units::two_pi * std::sqrt(c.l_q * c.c_q)) * 1e-9).epsilon(1e-12));
    CHECK(m.g_c == 0.0);
}

TEST_CASE("coupling signs follow the mode function and its slope") {
    const CircuitParams base = realistic();
    const double l = base.length;
    for (int i = 0; i <= 10; ++i) {
        CircuitParams c = base;
        c.x_c = -l / 2 + l * i / 10.0;
        c.x_m = c.x_c;
        const DerivedModel m = derive_model(c);
        const double f = mode_function(1, l, c.x_c);
        const double df = mode_function_derivative(1, l, c.x_m);
        if (std::abs(f) > 1e-9) CHECK(std::signbit(m.g_c) == std::signbit(f));
        if (std::abs(df) > 1e-9 * std::sqrt(2 / l) * units::pi / l) CHECK(std::signbit(m.g_l) == std::signbit(df));
    }

    CircuitParams plus = base, minus = base;
    plus.x_c = l / 2;
    minus.x_c = -l / 2;
    CHECK(derive_model(plus).g_c == -derive_model(minus).g_c);
}

TEST_CASE("g_L is linear in M and g_C grows with C_g") {
    CircuitParams c = realistic();
    const double g1 = derive_model(c).g_l;
    c.m *= 3.0;
    CHECK(derive_model(c).g_l == doctest::Approx(3.0 * g1).epsilon(1e-13));
    c.m = 0.0;
    CHECK(derive_model(c).g_l == 0.0);

    c = realistic();
    double previous = 0.0;
    for (int i = 1; i <= 40; ++i) {
        c.c_g = 0.5e-15 * i;
        const double g = std::abs(derive_model(c).g_c);
        CHECK(g > previous);
        previous = g;
    }
}

TEST_CASE("solve_for_targets") {
    const CircuitParams tmpl = realistic();
    const CircuitParams solved = solve_for_targets({0.1, 0.1}, tmpl);
    const DerivedModel m = derive_model(solved);
    CHECK(m.g_c == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(m.g_l == doctest::Approx(0.1).epsilon(1e-3));
    const Polar pol = to_polar(to_jc_ajc({m.g_c, m.g_l}));
    CHECK(std::abs(pol.theta) < 1e-6);

    CHECK_THROWS_AS(solve_for_targets({-0.1, 0.1}, tmpl), SolverError);
    CircuitParams at_node = tmpl;
    at_node.x_m = tmpl.length / 2;
    CHECK_THROWS_AS(solve_for_targets({0.1, 0.1}, at_node), SolverError);
}

TEST_CASE("derived parameters convert to ArmParams") {
    ArmParams base;
    base.kappa = 1e-3;
    base.n_max = 7;
    const DerivedModel m = derive_model(realistic());
    const ArmParams p = m.to_arm_params(base);
    CHECK(p.omega_r == m.omega_r);
    CHECK(p.kappa == 1e-3);
    CHECK(p.n_max == 7);
    CHECK(std::holds_alternative<CapacitiveInductive>(p.coupling));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("CircuitParams validation") {
    CircuitParams c = realistic();
    c.c_q = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = realistic();
    c.x_c = c.length;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = realistic();
    c.e_j = 1e4;
    c.phi_ext = 0.5;  // strongly negative Josephson curvature
    CHECK_THROWS_AS(derive_model(c), std::invalid_argument);
}
