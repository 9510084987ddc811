#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "armsim/errors.hpp"
#include "armsim/purcell.hpp"

using namespace armsim;
using std::numbers::pi;

namespace {

ArmParams params(double wq, double g, double theta, int n_max = 10) {
    ArmParams p;
    p.omega_r = 5.0;
    p.omega_q = wq;
    p.coupling = Polar{g, theta};
    p.kappa = 1e-3;
    p.n_max = n_max;
    return p;
}

}  // namespace

TEST_CASE("closed-form Purcell rates") {
    PurcellReport r = purcell_formulas(params(8.0, 0.1, 0.0));
    CHECK(r.gamma_jc / 1e-3 == doctest::Approx(0.01 / (9 + 1e-6 + 0.01)).epsilon(1e-12));
    CHECK(r.gamma_jc / 1e-3 == doctest::Approx(1.110e-3).epsilon(1e-3));
    CHECK(r.gamma_ajc == 0.0);
    r = purcell_formulas(params(8.0, 0.1, pi / 2));
    CHECK(r.gamma_ajc / 1e-3 == doctest::Approx(0.01 / (169 + 1e-6 + 0.02)).epsilon(1e-12));
    CHECK(r.gamma_ajc / 1e-3 == doctest::Approx(5.916e-5).epsilon(1e-3));
    r = purcell_formulas(params(6.3, 0.1, 0.77));
    CHECK(r.gamma_rabi == r.gamma_jc + r.gamma_ajc);
    r = purcell_formulas(params(6.3, 0.0, 0.77));
    CHECK(r.gamma_rabi == 0.0);
}

TEST_CASE("decay-fit oracle") {
    SUBCASE("JC channel") {
        const PurcellFit fit = purcell_numeric(params(8.0, 0.1, 0.0));
        // frozen from the independent dense oracle (tests/oracles/oracles.py)
        CHECK(fit.rate == doctest::Approx(1.1074210422519572e-06).epsilon(1e-6));
        CHECK(fit.rate == doctest::Approx(purcell_formulas(params(8.0, 0.1, 0.0)).gamma_jc).epsilon(0.05));
        CHECK(fit.residual < 0.05);
        CHECK(fit.samples > 10);
    }
    SUBCASE("AJC channel leaks from |g,0>") {
        const PurcellFit fit = purcell_numeric(params(8.0, 0.1, pi / 2), QubitLevel::ground);
        CHECK(fit.rate == doctest::Approx(5.9161096660256234e-08).epsilon(1e-6));
        CHECK(fit.rate == doctest::Approx(purcell_formulas(params(8.0, 0.1, pi / 2)).gamma_ajc).epsilon(0.10));
    }
    SUBCASE("|e,0> is dark under a pure counter-rotating coupling") {
        CHECK(purcell_numeric(params(8.0, 0.1, pi / 2)).rate < 1e-12);
    }
    SUBCASE("no coupling, no decay") {
        CHECK(std::abs(purcell_numeric(params(8.0, 0.0, 0.0)).rate) < 1e-12);
    }
    SUBCASE("needs cavity loss") {
        ArmParams p = params(8.0, 0.1, 0.0);
        p.kappa = 0.0;
        CHECK_THROWS_AS(purcell_numeric(p), std::invalid_argument);
    }
}

TEST_CASE("equal-chi comparison curve") {
    const std::vector<double> chis{1e-4, 5e-4, 1e-3, 2e-3, 3.333e-3};
    const auto rows = purcell_comparison_curve(chis, params(8.0, 0.1, 0.0));
    REQUIRE(rows.size() == chis.size());
    for (const auto& r : rows) {
        REQUIRE(r.gamma_jc_over_kappa.has_value());
        if (r.gamma_ajc_over_kappa) CHECK(*r.gamma_ajc_over_kappa < *r.gamma_jc_over_kappa);
    }
    // chi = g^2/Delta = 3.333 MHz needs Delta = 3 GHz for JC; AJC would need
    // Sigma = 3 GHz, i.e. omega_q < 0.
    CHECK(*rows[4].omega_q_jc == doctest::Approx(8.0).epsilon(1e-3));
    CHECK(*rows[4].gamma_jc_over_kappa == doctest::Approx(1.110e-3).epsilon(1e-3));
    CHECK_FALSE(rows[4].gamma_ajc_over_kappa.has_value());
    CHECK(rows[0].gamma_ajc_over_kappa.has_value());

    // small chi: both vanish
    const std::vector<double> tiny{1e-9};
    const auto small = purcell_comparison_curve(tiny, params(8.0, 0.1, 0.0));
    CHECK(*small[0].gamma_jc_over_kappa < 1e-12);
    CHECK(*small[0].gamma_ajc_over_kappa < 1e-12);

    // fixed qubit frequency, coupling scaled instead
    const std::vector<double> target{3.333e-3};
    const auto scaled = purcell_comparison_curve(target, params(8.0, 0.1, 0.0), PurcellInversion::scale_coupling);
    REQUIRE(scaled[0].gamma_ajc_over_kappa.has_value());
    CHECK(*scaled[0].g_jc == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(*scaled[0].g_ajc == doctest::Approx(std::sqrt(3.333e-3 * 13.0)).epsilon(1e-12));
    CHECK(*scaled[0].gamma_jc_over_kappa / *scaled[0].gamma_ajc_over_kappa == doctest::Approx(13.0 / 3.0).epsilon(1e-3));
}
