#include <doctest.h>

#include <string>

#include "armsim/config.hpp"
#include "armsim/errors.hpp"

using namespace armsim;

namespace {

const char* kMinimal = R"(
[model]
omega_r_ghz = 5
omega_q_ghz = 5.5
g_ghz = 0.1
theta_rad = 0.7854
kappa_mhz = 1

[sweep]
probe_ghz = 4.9, 5.0, 5.1
)";

std::string with(const std::string& extra) { return std::string(kMinimal) + extra; }

bool mentions(const ConfigError& e, const std::string& s) { return std::string(e.what()).find(s) != std::string::npos; }

}  // namespace

TEST_CASE("minimal config gets defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.engine.n_max == 10);
    CHECK(c.model.n_max == 10);
    CHECK(c.sweep.method == ResponseMethod::linear_response);
    CHECK(c.sweep.prep == StatePrep::steady);
    CHECK(c.model.kappa == doctest::Approx(1e-3));
    CHECK(c.model.gamma == 0.0);
    const auto* pol = std::get_if<Polar>(&c.model.coupling);
    REQUIRE(pol != nullptr);
    CHECK(pol->g == 0.1);
    CHECK(pol->theta == 0.7854);
    CHECK(c.sweep.probe_grid == std::vector<double>{4.9, 5.0, 5.1});
    CHECK(c.sweep.axis == SecondAxis::none);
    CHECK_FALSE(c.output.csv_path.has_value());
    CHECK(c.output.normalize);

    bool echoed_n_max = false, echoed_workers = false;
    for (const auto& line : c.resolved) {
        echoed_n_max |= line == "engine.n_max = 10";
        echoed_workers |= line.find("workers") != std::string::npos;
    }
    CHECK(echoed_n_max);
    CHECK_FALSE(echoed_workers);
}

TEST_CASE("lists, units and alternative couplings") {
    RunConfig c = parse_config(with("qubit_freq_ghz = linspace(4, 6, 5)\n"));
    CHECK(c.sweep.axis == SecondAxis::qubit_freq);
    CHECK(c.sweep.axis_values == std::vector<double>{4.0, 4.5, 5.0, 5.5, 6.0});

    c = parse_config(R"([model]
omega_r_ghz = 5
omega_q_ghz = 6
g_jc_mhz = 80
g_ajc_mhz = 20
kappa_ghz = 0.002
gamma_mhz = 0.5
[engine]
n_max = 14
workers = 3
)");
    const auto* jc = std::get_if<JcAjc>(&c.model.coupling);
    REQUIRE(jc != nullptr);
    CHECK(jc->g_jc == doctest::Approx(0.08));
    CHECK(c.model.gamma == doctest::Approx(5e-4));
    CHECK(c.model.n_max == 14);
    CHECK(c.engine.workers == 3);

    c = parse_config(R"([model]
omega_r_ghz = 5
omega_q_ghz = 6
g_c_ghz = 0.05
g_l_ghz = -0.02
kappa_mhz = 1
[sweep]
chi_mhz = 0.5, 1
n_max_list = 5, 10
quantity = chi
state_prep = excited
[output]
csv_path = out.csv
normalize = false
)");
    CHECK(std::holds_alternative<CapacitiveInductive>(c.model.coupling));
    CHECK(c.chi_targets.size() == 2);
    CHECK(c.chi_targets[1] == doctest::Approx(1e-3));
    CHECK(c.n_max_list == std::vector<int>{5, 10});
    CHECK(c.quantity == ConvergenceQuantity::chi);
    CHECK(c.sweep.prep == StatePrep::excited);
    CHECK(*c.output.csv_path == "out.csv");
    CHECK_FALSE(c.output.normalize);
}

TEST_CASE("schema violations") {
    auto fails_with = [](const std::string& text, const std::string& fragment) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            CHECK_MESSAGE(mentions(e, fragment), std::string(e.what()));
            return;
        }
        FAIL("expected ConfigError mentioning " << fragment);
    };
    fails_with(with("bogus_key = 1\n"), "sweep.bogus_key");
    fails_with(with("[unknown]\n"), "unknown section");
    fails_with(with("probe_ghz = 1\n"), "duplicate key");
    fails_with(with("[engine]\nn_max = ten\n"), "engine.n_max");
    fails_with(with("theta_rad = 1\nqubit_freq_ghz = 5\n"), "mutually exclusive");
    fails_with(with("method = euler\n"), "linear_response|time_domain");
    fails_with("[model]\nomega_r_ghz = 5\nomega_q_ghz = 5\nkappa_mhz = 1\n", "no coupling source");
    fails_with("[model]\nomega_r_ghz = 5\nomega_q_ghz = 5\ng_ghz = 0.1\ntheta_rad = 0\n", "kappa");
    fails_with("[model]\nomega_r_ghz = 5\ng_ghz = 0.1\ntheta_rad = 0\nkappa_mhz = 1\n", "omega_q");
    fails_with("[model]\nomega_r_ghz = 5\nomega_q_ghz = 5\ng_ghz = 0.1\ng_mhz = 100\ntheta_rad = 0\nkappa_mhz = 1\n",
               "use one unit");
    fails_with("[model]\nomega_r_ghz = 5\nomega_q_ghz = 5\ng_ghz = 0.1\ng_jc_ghz = 0.1\ntheta_rad = 0\nkappa_mhz = 1\n",
               "mixes coupling");
    fails_with("omega_r_ghz = 5\n", "outside of any section");
    fails_with("[model]\nnot a pair\n", "line 2");
    fails_with("[sweep]\nprobe_ghz = 1\n", "missing required section [model]");
    fails_with(with("chi_mhz = linspace(1, 2)\n"), "linspace takes");
    fails_with("[model]\nomega_r_ghz = -5\nomega_q_ghz = 5\ng_ghz = 0.1\ntheta_rad = 0\nkappa_mhz = 1\n", "model:");
}

TEST_CASE("model coupling and circuit block are exclusive") {
    const std::string circuit = R"(
[circuit]
c_per_len_f_per_m = 1.6e-10
l_per_len_h_per_m = 4.2e-7
length_m = 0.0122
c_g_f = 5e-15
c_q_f = 80e-15
l_q_h = 20e-9
e_j_ghz = 10
i_c_a = 20e-9
m_h = 50e-12
x_c_m = 0.0061
x_m_m = 0
phi_ext_phi0 = 0
)";
    CHECK_THROWS_WITH_AS(parse_config(std::string(kMinimal) + circuit), doctest::Contains("exactly one coupling source"),
                         ConfigError);

    const RunConfig c = parse_config("[model]\nkappa_mhz = 1\n" + circuit);
    REQUIRE(c.circuit.has_value());
    const ArmParams eff = c.effective_model();
    CHECK(std::holds_alternative<CapacitiveInductive>(eff.coupling));
    CHECK(eff.omega_r == doctest::Approx(4.98).epsilon(0.01));
    CHECK(eff.kappa == doctest::Approx(1e-3));

    CHECK_THROWS_AS(parse_config("[model]\nkappa_mhz = 1\nomega_r_ghz = 5\n" + circuit), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("[model]\nkappa_mhz = 1\n[circuit]\nlength_m = 0.01\n"),
                         doctest::Contains("circuit.c_per_len_f_per_m"), ConfigError);
}

TEST_CASE("number formatting is locale independent and round-trips") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(5.0) == "5");
    CHECK(format_data(0.1) == "0.10000000000000001");
    CHECK(format_data(std::nan("")) == "nan");
    CHECK(std::stod(format_data(1.0 / 3.0)) == 1.0 / 3.0);
}
