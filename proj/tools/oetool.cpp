// oetool: experiment runner, invariant checker, and plotter for the
// observational-entropy toolkit.
//
//   oetool run <config>                      run a configured experiment
//   oetool check [scope] [--cases N] [--seed S] [--json out.json]
//   oetool plot <csv> [--out file.svg] [--t-scale T]

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "oe/checks.hpp"
#include "oe/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"observational entropy toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "config file (dotted-key format)")->required();

    std::string scope = "all";
    long long cases = 100, seed = 1;
    std::string check_json;
    CLI::App* check = app.add_subcommand("check", "run randomized invariant suites");
    check->add_option("scope", scope, "module scope or 'all'");
    check->add_option("--cases", cases, "random cases per suite");
    check->add_option("--seed", seed, "master seed");
    check->add_option("--json", check_json, "write machine-readable report");

    std::string csv_path, svg_out = "plot.svg";
    double t_scale = 1.0;
    CLI::App* plot = app.add_subcommand("plot", "render an entropy CSV as an SVG line plot");
    plot->add_option("csv", csv_path, "input CSV (schema: t,label,S_oe,...)")->required();
    plot->add_option("--out", svg_out, "output SVG path");
    plot->add_option("--t-scale", t_scale, "timescale T for the ln(1+t/T) axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : oe::cli::kExitConfig;
    }

    if (run->parsed()) return oe::cli::run_config(config_path);
    if (check->parsed())
        return oe::cli::run_check_command(scope, static_cast<std::uint64_t>(seed),
                                          static_cast<int>(cases), check_json);
    if (plot->parsed()) return oe::cli::run_plot_command(csv_path, svg_out, t_scale);
    return oe::cli::kExitConfig;
}
