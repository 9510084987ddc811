#include "armsim/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include "armsim/errors.hpp"
#include "armsim/parallel.hpp"
#include "armsim/svg.hpp"

namespace armsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::pair<std::string_view, Subcommand> kSubcommands[] = {
    {"spectrum", Subcommand::spectrum},     {"splitting", Subcommand::splitting},
    {"dispersive", Subcommand::dispersive}, {"sweet-spot", Subcommand::sweet_spot},
    {"purcell", Subcommand::purcell},       {"circuit", Subcommand::circuit},
    {"convergence", Subcommand::convergence},
};

class CsvWriter {
public:
    CsvWriter(Subcommand sub, const RunConfig& cfg) {
        text_ = "# arm-sim " + std::string(version()) + "\n";
        text_ += "# subcommand = " + std::string(subcommand_name(sub)) + "\n";
        for (const auto& line : cfg.resolved) text_ += "# " + line + "\n";
    }

    void columns(std::initializer_list<std::string_view> names) {
        bool first = true;
        for (const auto n : names) {
            if (!first) text_ += ',';
            text_ += n;
            first = false;
        }
        text_ += '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (const double v : values) {
            if (!first) text_ += ',';
            text_ += format_data(v);
            first = false;
        }
        text_ += '\n';
    }

    std::string take() { return std::move(text_); }

private:
    std::string text_;
};

double or_nan(const std::optional<double>& v) { return v ? *v : kNaN; }

void require_probe(const RunConfig& cfg, Subcommand sub) {
    if (cfg.sweep.probe_grid.empty()) {
        throw ConfigError(std::string(subcommand_name(sub)) + " needs sweep.probe_ghz");
    }
}

std::vector<double> axis_or_model(const RunConfig& cfg, SecondAxis wanted, double model_value) {
    if (cfg.sweep.axis == wanted) return cfg.sweep.axis_values;
    if (cfg.sweep.axis != SecondAxis::none) {
        throw ConfigError(std::string("this subcommand sweeps ") +
                          (wanted == SecondAxis::theta ? "sweep.theta_rad" : "sweep.qubit_freq_ghz") +
                          " only");
    }
    return {model_value};
}

RunOutputs run_spectrum(const RunConfig& cfg, int workers, bool want_svg) {
    require_probe(cfg, Subcommand::spectrum);
    const SpectrumResult r = transmission_map(cfg.effective_model(), cfg.sweep, workers);
    CsvWriter csv(Subcommand::spectrum, cfg);
    const bool has_axis = r.axis != SecondAxis::none;
    const std::string_view axis_col = r.axis == SecondAxis::theta ? "theta_rad" : "omega_q_ghz";
    if (has_axis) {
        csv.columns({axis_col, "omega_p_ghz", "re_amp", "im_amp", "transmission"});
    } else {
        csv.columns({"omega_p_ghz", "re_amp", "im_amp", "transmission"});
    }
    double global = 0.0;
    for (const auto& p : r.points) global = std::max(global, std::abs(p.amplitude));
    for (const auto& p : r.points) {
        const double t = cfg.output.normalize ? p.transmission : std::abs(p.amplitude);
        if (has_axis) {
            csv.row({p.axis_value, p.probe, p.amplitude.real(), p.amplitude.imag(), t});
        } else {
            csv.row({p.probe, p.amplitude.real(), p.amplitude.imag(), t});
        }
    }
    RunOutputs out{csv.take(), std::nullopt};
    if (want_svg) out.svg = emit_svg(r, has_axis ? SvgStyle::heatmap : SvgStyle::line, cfg.output.normalize);
    return out;
}

RunOutputs run_splitting(const RunConfig& cfg, int workers, bool want_svg) {
    require_probe(cfg, Subcommand::splitting);
    const ArmParams model = cfg.effective_model();
    const SecondAxis axis = cfg.sweep.axis;
    const std::vector<double> values =
        axis == SecondAxis::none ? std::vector<double>{model.polar().theta} : cfg.sweep.axis_values;
    std::vector<double> split(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const ArmParams p = axis == SecondAxis::none ? model : apply_axis(model, axis, values[i]);
        split[i] = or_nan(measure_splitting(p, cfg.sweep.probe_grid, cfg.sweep.prep, workers));
    }
    CsvWriter csv(Subcommand::splitting, cfg);
    csv.columns({axis == SecondAxis::qubit_freq ? "omega_q_ghz" : "theta_rad", "splitting_ghz"});
    for (std::size_t i = 0; i < values.size(); ++i) csv.row({values[i], split[i]});
    RunOutputs out{csv.take(), std::nullopt};
    if (want_svg) {
        const Series s{"series-0", values, split};
        out.svg = emit_line_plot(std::span(&s, 1),
                                 {axis == SecondAxis::qubit_freq ? "qubit frequency (GHz)" : "mixing angle (rad)",
                                  "splitting (GHz)", "vacuum Rabi splitting"});
    }
    return out;
}

RunOutputs run_dispersive(const RunConfig& cfg, int workers, bool want_svg) {
    const ArmParams model = cfg.effective_model();
    const std::vector<double> thetas = axis_or_model(cfg, SecondAxis::theta, model.polar().theta);
    const double g = model.polar().g;
    struct Row {
        DispersiveReport report;
        double peak_g = kNaN;
        double peak_e = kNaN;
    };
    std::vector<Row> rows(thetas.size());
    parallel_for(thetas.size(), workers, [&](std::size_t i) {
        const ArmParams p = with_polar(model, g, thetas[i]);
        rows[i].report = dispersive_report(p);
        if (!cfg.sweep.probe_grid.empty()) {
            const ConditionedPeaks peaks = conditioned_peaks(p, cfg.sweep.probe_grid, 1);
            rows[i].peak_g = peaks.ground;
            rows[i].peak_e = peaks.excited;
        }
    });
    CsvWriter csv(Subcommand::dispersive, cfg);
    csv.columns({"theta_rad", "delta_ghz", "sigma_ghz", "chi_jc_ghz", "chi_ajc_ghz", "chi_rabi_ghz",
                 "chi_numeric_ghz", "peak_g_ghz", "peak_e_ghz"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i].report;
        csv.row({thetas[i], r.delta, r.sigma, r.chi_jc, r.chi_ajc, r.chi_rabi, or_nan(r.chi_numeric), rows[i].peak_g,
                 rows[i].peak_e});
    }
    RunOutputs out{csv.take(), std::nullopt};
    if (want_svg) {
        std::vector<Series> series;
        if (cfg.sweep.probe_grid.empty()) {
            Series s{"series-0", thetas, {}};
            for (const auto& r : rows) s.y.push_back(or_nan(r.report.chi_numeric));
            series.push_back(std::move(s));
            out.svg = emit_line_plot(series, {"mixing angle (rad)", "chi (GHz)", "dispersive shift"});
        } else {
            Series sg{"branch-g", {}, {}}, se{"branch-e", {}, {}};
            for (std::size_t i = 0; i < rows.size(); ++i) {
                sg.x.push_back(rows[i].peak_g);
                sg.y.push_back(thetas[i]);
                se.x.push_back(rows[i].peak_e);
                se.y.push_back(thetas[i]);
            }
            series = {sg, se};
            out.svg = emit_line_plot(series, {"probe frequency (GHz)", "mixing angle (rad)",
                                              "resonator line with qubit in g and e"});
        }
    }
    return out;
}

RunOutputs run_sweet_spot(const RunConfig& cfg, int workers, bool want_svg) {
    const ArmParams model = cfg.effective_model();
    const std::vector<double> qubit = axis_or_model(cfg, SecondAxis::qubit_freq, model.omega_q);
    std::vector<std::pair<double, double>> roots(qubit.size());
    parallel_for(qubit.size(), workers, [&](std::size_t i) {
        const ArmParams p = apply_axis(model, SecondAxis::qubit_freq, qubit[i]);
        roots[i] = {or_nan(sweet_spot(p, cfg.theta_lo, cfg.theta_hi)), or_nan(sweet_spot_closed_form(p))};
    });
    CsvWriter csv(Subcommand::sweet_spot, cfg);
    csv.columns({"omega_q_ghz", "theta0_numeric_rad", "theta0_closed_form_rad"});
    for (std::size_t i = 0; i < qubit.size(); ++i) csv.row({qubit[i], roots[i].first, roots[i].second});
    RunOutputs out{csv.take(), std::nullopt};
    if (want_svg) {
        Series num{"series-0", qubit, {}}, closed{"series-1", qubit, {}};
        for (const auto& r : roots) {
            num.y.push_back(r.first);
            closed.y.push_back(r.second);
        }
        const std::vector<Series> series{num, closed};
        out.svg = emit_line_plot(series, {"qubit frequency (GHz)", "theta0 (rad)", "sweet spot"});
    }
    return out;
}

RunOutputs run_purcell(const RunConfig& cfg, bool want_svg) {
    if (cfg.chi_targets.empty()) throw ConfigError("purcell needs sweep.chi_ghz");
    const auto rows = purcell_comparison_curve(cfg.chi_targets, cfg.effective_model(), cfg.inversion);
    CsvWriter csv(Subcommand::purcell, cfg);
    csv.columns({"chi_ghz", "gamma_jc_over_kappa", "gamma_ajc_over_kappa"});
    for (const auto& r : rows) csv.row({r.chi, or_nan(r.gamma_jc_over_kappa), or_nan(r.gamma_ajc_over_kappa)});
    RunOutputs out{csv.take(), std::nullopt};
    if (want_svg) {
        Series jc{"jc", {}, {}}, ajc{"ajc", {}, {}};
        for (const auto& r : rows) {
            jc.x.push_back(std::abs(r.chi) * 1e3);
            ajc.x.push_back(std::abs(r.chi) * 1e3);
            jc.y.push_back(r.gamma_jc_over_kappa ? std::log10(*r.gamma_jc_over_kappa) : kNaN);
            ajc.y.push_back(r.gamma_ajc_over_kappa ? std::log10(*r.gamma_ajc_over_kappa) : kNaN);
        }
        const std::vector<Series> series{jc, ajc};
        out.svg = emit_line_plot(series, {"|chi| (MHz)", "log10(Gamma_P / kappa)", "Purcell decay"});
    }
    return out;
}

RunOutputs run_circuit(const RunConfig& cfg) {
    if (!cfg.circuit) throw ConfigError("circuit needs a [circuit] section");
    const DerivedModel m = derive_model(*cfg.circuit);
    const JcAjc c = to_jc_ajc(CapacitiveInductive{m.g_c, m.g_l});
    const Polar pol = to_polar(c);
    CsvWriter csv(Subcommand::circuit, cfg);
    csv.columns({"omega_r_ghz", "omega_q_ghz", "g_c_ghz", "g_l_ghz", "g_jc_ghz", "g_ajc_ghz", "theta_rad"});
    csv.row({m.omega_r, m.omega_q, m.g_c, m.g_l, c.g_jc, c.g_ajc, pol.theta});
    return {csv.take(), std::nullopt};
}

RunOutputs run_convergence(const RunConfig& cfg, int workers, bool want_svg) {
    if (cfg.n_max_list.size() < 2) throw ConfigError("convergence needs sweep.n_max_list with at least two entries");
    if (cfg.quantity != ConvergenceQuantity::chi) require_probe(cfg, Subcommand::convergence);
    const auto rows =
        convergence_check(cfg.effective_model(), cfg.n_max_list, cfg.quantity, cfg.sweep.probe_grid, workers);
    CsvWriter csv(Subcommand::convergence, cfg);
    csv.columns({"n_max", "value", "rel_change"});
    Series s{"series-0", {}, {}};
    for (const auto& r : rows) {
        csv.row({static_cast<double>(r.n_max), r.value, or_nan(r.relative_change)});
        s.x.push_back(r.n_max);
        s.y.push_back(r.value);
    }
    RunOutputs out{csv.take(), std::nullopt};
    if (want_svg) out.svg = emit_line_plot(std::span(&s, 1), {"n_max", "value", "truncation convergence"});
    return out;
}

std::string quote(std::string_view s) {
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
    if (!f) throw ConfigError("failed writing " + path.string());
}

}  // namespace

std::string_view version() { return ARMSIM_VERSION; }

std::optional<Subcommand> parse_subcommand(std::string_view name) {
    for (const auto& [n, s] : kSubcommands) {
        if (n == name) return s;
    }
    return std::nullopt;
}

std::string_view subcommand_name(Subcommand sub) {
    for (const auto& [n, s] : kSubcommands) {
        if (s == sub) return n;
    }
    return "unknown";
}

int effective_workers(const RunConfig& config) {
    if (const char* env = std::getenv("ARM_SIM_WORKERS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 0 || v > 4096) throw ConfigError("ARM_SIM_WORKERS must be a non-negative integer");
        return static_cast<int>(v);
    }
    return config.engine.workers;
}

RunOutputs execute(Subcommand sub, const RunConfig& config, int workers, bool want_svg) {
    switch (sub) {
        case Subcommand::spectrum: return run_spectrum(config, workers, want_svg);
        case Subcommand::splitting: return run_splitting(config, workers, want_svg);
        case Subcommand::dispersive: return run_dispersive(config, workers, want_svg);
        case Subcommand::sweet_spot: return run_sweet_spot(config, workers, want_svg);
        case Subcommand::purcell: return run_purcell(config, want_svg);
        case Subcommand::circuit: return run_circuit(config);
        case Subcommand::convergence: return run_convergence(config, workers, want_svg);
    }
    throw ConfigError("unknown subcommand");
}

int run_subcommand(const CliRequest& request, std::ostream& out, std::ostream& err) {
    auto report = [&](std::string_view kind, std::string_view message) {
        err << "error kind=" << kind << " subcommand=" << request.subcommand << " message=" << quote(message)
            << '\n';
    };
    try {
        const auto sub = parse_subcommand(request.subcommand);
        if (!sub) throw ConfigError("unknown subcommand '" + request.subcommand + "'");
        const RunConfig cfg = load_config(request.config_path);
        auto pick = [](const std::optional<std::filesystem::path>& cli, const std::optional<std::string>& file) {
            return cli ? cli : file ? std::optional<std::filesystem::path>(*file) : std::nullopt;
        };
        const auto csv_path = pick(request.csv_path, cfg.output.csv_path);
        const auto svg_path = pick(request.svg_path, cfg.output.svg_path);
        const RunOutputs result = execute(*sub, cfg, effective_workers(cfg), svg_path.has_value());
        if (csv_path) {
            write_file(*csv_path, result.csv);
        } else {
            out << result.csv;
        }
        if (svg_path && result.svg) write_file(*svg_path, *result.svg);
        return 0;
    } catch (const ConfigError& e) {
        report("config", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        report("config", e.what());
        return 1;
    } catch (const SolverError& e) {
        report("numeric", e.what());
        return 2;
    } catch (const std::exception& e) {
        report("numeric", e.what());
        return 2;
    }
}

}  // namespace armsim
