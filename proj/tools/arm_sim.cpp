// arm-sim: anisotropic Rabi model spectra, dispersive shifts, Purcell rates
// and circuit-derived couplings from a config file.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "armsim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Anisotropic Rabi model simulator"};
    app.set_version_flag("--version", std::string(armsim::version()));
    app.require_subcommand(1, 1);

    armsim::CliRequest request;
    std::string config, out, svg;
    for (const char* name : {"spectrum", "splitting", "dispersive", "sweet-spot", "purcell", "circuit", "convergence"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "Run configuration file")->required();
        sub->add_option("--out", out, "CSV output path (default: config or stdout)");
        sub->add_option("--svg", svg, "SVG output path");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error kind=config subcommand=none message=\"" << e.what() << "\"\n";
        return 1;
    }

    request.subcommand = app.get_subcommands().front()->get_name();
    request.config_path = config;
    if (!out.empty()) request.csv_path = out;
    if (!svg.empty()) request.svg_path = svg;
    return armsim::run_subcommand(request, std::cout, std::cerr);
}
