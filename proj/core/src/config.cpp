#include "armsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "armsim/errors.hpp"

namespace armsim {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string format_data(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

class Section {
public:
    explicit Section(std::string name) : name_(std::move(name)) {}

    void add(const std::string& key, Entry e) {
        const int line = e.line;
        if (!entries_.emplace(key, std::move(e)).second) {
            throw ConfigError("line " + std::to_string(line) + ": duplicate key " + name_ + "." + key);
        }
    }

    std::optional<Entry> take(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        Entry e = std::move(it->second);
        entries_.erase(it);
        return e;
    }

    bool has(const std::string& key) const { return entries_.contains(key); }

    void reject_leftovers() const {
        if (entries_.empty()) return;
        // Report the earliest offending line for a stable message.
        const auto it = std::min_element(entries_.begin(), entries_.end(),
                                         [](const auto& a, const auto& b) { return a.second.line < b.second.line; });
        throw ConfigError("line " + std::to_string(it->second.line) + ": unknown key " + name_ + "." + it->first);
    }

    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::map<std::string, Entry> entries_;
};

std::string where(const Section& s, const std::string& key, const Entry& e) {
    return "line " + std::to_string(e.line) + ": " + s.name() + "." + key;
}

double parse_double(std::string_view text, const std::string& context) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(context + ": expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view text, const std::string& context) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw ConfigError(context + ": expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(std::string_view text, const std::string& context) {
    text = trim(text);
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(context + ": expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split_commas(std::string_view text) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = text.find(',');
        out.push_back(trim(text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

struct NumberList {
    std::vector<double> values;
    std::string canonical;
};

// "a, b, c" or "linspace(start, stop, count)", each value scaled by `scale`.
NumberList parse_list(std::string_view text, double scale, const std::string& context) {
    text = trim(text);
    NumberList out;
    if (text.starts_with("linspace(")) {
        if (!text.ends_with(")")) throw ConfigError(context + ": unterminated linspace(...)");
        const auto args = split_commas(text.substr(9, text.size() - 10));
        if (args.size() != 3) throw ConfigError(context + ": linspace takes (start, stop, count)");
        const double a = parse_double(args[0], context);
        const double b = parse_double(args[1], context);
        const int n = parse_int(args[2], context);
        if (n < 1) throw ConfigError(context + ": linspace count must be >= 1");
        if (n == 1 && a != b) throw ConfigError(context + ": linspace with one point needs start == stop");
        out.values.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            out.values[static_cast<std::size_t>(i)] = (i == n - 1 ? b : a + (b - a) * t) * scale;
        }
        out.canonical = "linspace(" + format_number(a) + ", " + format_number(b) + ", " + std::to_string(n) + ")";
        return out;
    }
    if (text.empty()) throw ConfigError(context + ": empty list");
    for (const auto item : split_commas(text)) {
        const double v = parse_double(item, context);
        out.values.push_back(v * scale);
        if (!out.canonical.empty()) out.canonical += ", ";
        out.canonical += format_number(v);
    }
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) { tokenize(text); }

    Section& section(const std::string& name) {
        for (auto& s : sections_) {
            if (s.name() == name) return s;
        }
        return sections_.emplace_back(name);
    }

    bool has_section(const std::string& name) const {
        return std::any_of(sections_.begin(), sections_.end(), [&](const Section& s) { return s.name() == name; });
    }

    void record(const std::string& line) { resolved.push_back(line); }

    std::vector<std::string> resolved;

private:
    void tokenize(std::string_view text) {
        static const std::vector<std::string> known = {"model", "circuit", "sweep", "engine", "output"};
        Section* current = nullptr;
        int line_no = 0;
        while (!text.empty()) {
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
            ++line_no;

            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const std::string where = "line " + std::to_string(line_no);

            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError(where + ": malformed section header");
                const std::string name(trim(line.substr(1, line.size() - 2)));
                if (std::find(known.begin(), known.end(), name) == known.end()) {
                    throw ConfigError(where + ": unknown section [" + name + "]");
                }
                if (has_section(name)) throw ConfigError(where + ": section [" + name + "] repeated");
                current = &sections_.emplace_back(name);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
            if (current == nullptr) throw ConfigError(where + ": key outside of any section");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) throw ConfigError(where + ": empty key");
            if (value.empty()) throw ConfigError(where + ": empty value for " + current->name() + "." + key);
            current->add(key, Entry{value, line_no});
        }
    }

    std::deque<Section> sections_;  // stable addresses while tokenizing
};

// A frequency quantity that may be given as <base>_ghz or <base>_mhz.
std::optional<double> take_frequency(Section& s, const std::string& base) {
    auto ghz = s.take(base + "_ghz");
    auto mhz = s.take(base + "_mhz");
    if (ghz && mhz) {
        throw ConfigError(where(s, base + "_mhz", *mhz) + ": also given as " + base + "_ghz; use one unit");
    }
    if (ghz) return parse_double(ghz->value, where(s, base + "_ghz", *ghz));
    if (mhz) return parse_double(mhz->value, where(s, base + "_mhz", *mhz)) * 1e-3;
    return std::nullopt;
}

std::optional<NumberList> take_frequency_list(Section& s, const std::string& base) {
    auto ghz = s.take(base + "_ghz");
    auto mhz = s.take(base + "_mhz");
    if (ghz && mhz) {
        throw ConfigError(where(s, base + "_mhz", *mhz) + ": also given as " + base + "_ghz; use one unit");
    }
    if (ghz) return parse_list(ghz->value, 1.0, where(s, base + "_ghz", *ghz));
    if (mhz) {
        NumberList l = parse_list(mhz->value, 1e-3, where(s, base + "_mhz", *mhz));
        // Echo in GHz so the header has a single unit per quantity.
        l.canonical.clear();
        for (const double v : l.values) {
            if (!l.canonical.empty()) l.canonical += ", ";
            l.canonical += format_number(v);
        }
        return l;
    }
    return std::nullopt;
}

double require(std::optional<double> v, const std::string& what) {
    if (!v) throw ConfigError("missing required key " + what);
    return *v;
}

template <class Enum>
Enum take_choice(Section& s, const std::string& key, const std::vector<std::pair<std::string, Enum>>& choices,
                 Enum fallback, std::string& chosen) {
    const auto e = s.take(key);
    if (!e) {
        for (const auto& [name, value] : choices) {
            if (value == fallback) chosen = name;
        }
        return fallback;
    }
    for (const auto& [name, value] : choices) {
        if (e->value == name) {
            chosen = name;
            return value;
        }
    }
    std::string allowed;
    for (const auto& c : choices) allowed += (allowed.empty() ? "" : "|") + c.first;
    throw ConfigError(where(s, key, *e) + ": expected one of " + allowed + ", got '" + e->value + "'");
}

void parse_model(Parser& p, RunConfig& cfg, bool has_circuit) {
    Section& s = p.section("model");
    const std::string sec = "model";

    const auto omega_r = take_frequency(s, "omega_r");
    const auto omega_q = take_frequency(s, "omega_q");
    const auto g = take_frequency(s, "g");
    const auto theta = s.take("theta_rad");
    const auto g_jc = take_frequency(s, "g_jc");
    const auto g_ajc = take_frequency(s, "g_ajc");
    const auto g_c = take_frequency(s, "g_c");
    const auto g_l = take_frequency(s, "g_l");
    const auto kappa = take_frequency(s, "kappa");
    const auto gamma = take_frequency(s, "gamma");
    s.reject_leftovers();

    const int polar_keys = (g ? 1 : 0) + (theta ? 1 : 0);
    const int jc_keys = (g_jc ? 1 : 0) + (g_ajc ? 1 : 0);
    const int cl_keys = (g_c ? 1 : 0) + (g_l ? 1 : 0);
    const int forms = (polar_keys > 0) + (jc_keys > 0) + (cl_keys > 0);

    if (has_circuit) {
        if (forms > 0) {
            throw ConfigError("coupling given both in [model] and by [circuit]; exactly one coupling source is allowed");
        }
        if (omega_r || omega_q) {
            throw ConfigError("omega_r/omega_q are derived from [circuit] and must not be set in [model]");
        }
    } else {
        if (forms == 0) {
            throw ConfigError("no coupling source: give g + theta_rad, g_jc + g_ajc or g_c + g_l in [model], or a "
                              "[circuit] section");
        }
        if (forms > 1) throw ConfigError("[model] mixes coupling representations; use exactly one");
        cfg.model.omega_r = require(omega_r, "model.omega_r_ghz");
        cfg.model.omega_q = require(omega_q, "model.omega_q_ghz");
        if (polar_keys > 0) {
            const double t = theta ? parse_double(theta->value, where(s, "theta_rad", *theta)) : 0.0;
            if (!theta) throw ConfigError("missing required key model.theta_rad (coupling given as g)");
            cfg.model.coupling = Polar{require(g, "model.g_ghz"), t};
        } else if (jc_keys > 0) {
            cfg.model.coupling = JcAjc{require(g_jc, "model.g_jc_ghz"), require(g_ajc, "model.g_ajc_ghz")};
        } else {
            cfg.model.coupling =
                CapacitiveInductive{require(g_c, "model.g_c_ghz"), require(g_l, "model.g_l_ghz")};
        }
        p.record(sec + ".omega_r_ghz = " + format_number(cfg.model.omega_r));
        p.record(sec + ".omega_q_ghz = " + format_number(cfg.model.omega_q));
        if (const auto* pol = std::get_if<Polar>(&cfg.model.coupling)) {
            p.record(sec + ".g_ghz = " + format_number(pol->g));
            p.record(sec + ".theta_rad = " + format_number(pol->theta));
        } else if (const auto* jc = std::get_if<JcAjc>(&cfg.model.coupling)) {
            p.record(sec + ".g_jc_ghz = " + format_number(jc->g_jc));
            p.record(sec + ".g_ajc_ghz = " + format_number(jc->g_ajc));
        } else {
            const auto& cl = std::get<CapacitiveInductive>(cfg.model.coupling);
            p.record(sec + ".g_c_ghz = " + format_number(cl.g_c));
            p.record(sec + ".g_l_ghz = " + format_number(cl.g_l));
        }
    }
    cfg.model.kappa = require(kappa, "model.kappa_ghz (or kappa_mhz)");
    cfg.model.gamma = gamma.value_or(0.0);
    p.record(sec + ".kappa_ghz = " + format_number(cfg.model.kappa));
    p.record(sec + ".gamma_ghz = " + format_number(cfg.model.gamma));
}

void parse_circuit(Parser& p, RunConfig& cfg) {
    Section& s = p.section("circuit");
    CircuitParams c;
    struct Field {
        const char* key;
        double* target;
    };
    const Field fields[] = {
        {"c_per_len_f_per_m", &c.c_per_len}, {"l_per_len_h_per_m", &c.l_per_len}, {"length_m", &c.length},
        {"c_g_f", &c.c_g},                   {"c_q_f", &c.c_q},                    {"l_q_h", &c.l_q},
        {"e_j_ghz", &c.e_j},                 {"i_c_a", &c.i_c},                    {"m_h", &c.m},
        {"x_c_m", &c.x_c},                   {"x_m_m", &c.x_m},                    {"phi_ext_phi0", &c.phi_ext},
    };
    for (const auto& f : fields) {
        const auto e = s.take(f.key);
        if (!e) throw ConfigError(std::string("missing required key circuit.") + f.key);
        *f.target = parse_double(e->value, where(s, f.key, *e));
        p.record(std::string("circuit.") + f.key + " = " + format_number(*f.target));
    }
    if (const auto e = s.take("mode_index")) c.mode_index = parse_int(e->value, where(s, "mode_index", *e));
    p.record("circuit.mode_index = " + std::to_string(c.mode_index));
    s.reject_leftovers();
    try {
        c.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("circuit: ") + err.what());
    }
    cfg.circuit = c;
}

void parse_sweep(Parser& p, RunConfig& cfg) {
    Section& s = p.section("sweep");
    SweepSpec& sw = cfg.sweep;

    if (auto probe = take_frequency_list(s, "probe")) {
        sw.probe_grid = probe->values;
        p.record("sweep.probe_ghz = " + probe->canonical);
    }
    auto qubit = take_frequency_list(s, "qubit_freq");
    auto theta = s.take("theta_rad");
    if (qubit && theta) throw ConfigError("sweep: qubit_freq and theta_rad are mutually exclusive second axes");
    if (qubit) {
        sw.axis = SecondAxis::qubit_freq;
        sw.axis_values = qubit->values;
        p.record("sweep.qubit_freq_ghz = " + qubit->canonical);
    } else if (theta) {
        const NumberList l = parse_list(theta->value, 1.0, where(s, "theta_rad", *theta));
        sw.axis = SecondAxis::theta;
        sw.axis_values = l.values;
        p.record("sweep.theta_rad = " + l.canonical);
    }

    std::string chosen;
    sw.prep = take_choice<StatePrep>(
        s, "state_prep",
        {{"steady", StatePrep::steady}, {"ground", StatePrep::ground}, {"excited", StatePrep::excited}},
        StatePrep::steady, chosen);
    p.record("sweep.state_prep = " + chosen);
    sw.method = take_choice<ResponseMethod>(
        s, "method",
        {{"linear_response", ResponseMethod::linear_response}, {"time_domain", ResponseMethod::time_domain}},
        ResponseMethod::linear_response, chosen);
    p.record("sweep.method = " + chosen);
    if (const auto eps = take_frequency(s, "eps_p")) sw.eps_p = *eps;
    p.record("sweep.eps_p_ghz = " + format_number(sw.eps_p));

    if (auto chi = take_frequency_list(s, "chi")) {
        cfg.chi_targets = chi->values;
        p.record("sweep.chi_ghz = " + chi->canonical);
    }
    cfg.inversion = take_choice<PurcellInversion>(
        s, "inversion",
        {{"sweep_qubit", PurcellInversion::sweep_qubit}, {"scale_coupling", PurcellInversion::scale_coupling}},
        PurcellInversion::sweep_qubit, chosen);
    p.record("sweep.inversion = " + chosen);

    if (const auto e = s.take("n_max_list")) {
        std::string canonical;
        for (const auto item : split_commas(e->value)) {
            cfg.n_max_list.push_back(parse_int(item, where(s, "n_max_list", *e)));
            canonical += (canonical.empty() ? "" : ", ") + std::to_string(cfg.n_max_list.back());
        }
        p.record("sweep.n_max_list = " + canonical);
    }
    cfg.quantity = take_choice<ConvergenceQuantity>(s, "quantity",
                                                    {{"splitting", ConvergenceQuantity::splitting},
                                                     {"peak_position", ConvergenceQuantity::peak_position},
                                                     {"chi", ConvergenceQuantity::chi}},
                                                    ConvergenceQuantity::splitting, chosen);
    p.record("sweep.quantity = " + chosen);

    if (const auto e = s.take("theta_range_rad")) {
        const NumberList l = parse_list(e->value, 1.0, where(s, "theta_range_rad", *e));
        if (l.values.size() != 2 || !(l.values[1] > l.values[0])) {
            throw ConfigError(where(s, "theta_range_rad", *e) + ": expected 'lo, hi' with hi > lo");
        }
        cfg.theta_lo = l.values[0];
        cfg.theta_hi = l.values[1];
    }
    p.record("sweep.theta_range_rad = " + format_number(cfg.theta_lo) + ", " + format_number(cfg.theta_hi));
    s.reject_leftovers();
}

void parse_engine(Parser& p, RunConfig& cfg) {
    Section& s = p.section("engine");
    if (const auto e = s.take("n_max")) cfg.engine.n_max = parse_int(e->value, where(s, "n_max", *e));
    if (const auto e = s.take("atol")) cfg.engine.atol = parse_double(e->value, where(s, "atol", *e));
    if (const auto e = s.take("rtol")) cfg.engine.rtol = parse_double(e->value, where(s, "rtol", *e));
    if (const auto e = s.take("workers")) {
        cfg.engine.workers = parse_int(e->value, where(s, "workers", *e));
        if (cfg.engine.workers < 0) throw ConfigError(where(s, "workers", *e) + ": must be >= 0");
    }
    s.reject_leftovers();
    if (cfg.engine.n_max < 1) throw ConfigError("engine.n_max must be >= 1");
    if (!(cfg.engine.atol > 0.0) || !(cfg.engine.rtol > 0.0)) throw ConfigError("engine tolerances must be > 0");
    cfg.model.n_max = cfg.engine.n_max;
    p.record("engine.n_max = " + std::to_string(cfg.engine.n_max));
    p.record("engine.atol = " + format_number(cfg.engine.atol));
    p.record("engine.rtol = " + format_number(cfg.engine.rtol));
}

void parse_output(Parser& p, RunConfig& cfg) {
    Section& s = p.section("output");
    if (const auto e = s.take("csv_path")) cfg.output.csv_path = e->value;
    if (const auto e = s.take("svg_path")) cfg.output.svg_path = e->value;
    if (const auto e = s.take("normalize")) cfg.output.normalize = parse_bool(e->value, where(s, "normalize", *e));
    s.reject_leftovers();
    p.record(std::string("output.normalize = ") + (cfg.output.normalize ? "true" : "false"));
}

}  // namespace

ArmParams RunConfig::effective_model() const {
    if (!circuit) return model;
    return derive_model(*circuit).to_arm_params(model);
}

RunConfig parse_config(std::string_view text) {
    Parser p(text);
    RunConfig cfg;
    if (!p.has_section("model")) throw ConfigError("missing required section [model]");
    const bool has_circuit = p.has_section("circuit");
    parse_model(p, cfg, has_circuit);
    if (has_circuit) parse_circuit(p, cfg);
    parse_sweep(p, cfg);
    parse_engine(p, cfg);
    parse_output(p, cfg);
    try {
        cfg.effective_model().validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("model: ") + err.what());
    }
    cfg.resolved = std::move(p.resolved);
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace armsim
