#include "stochmech/cli/commands.hpp"
#include "stochmech/cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

using namespace stochmech::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic-mechanics solvers: spectra, Fokker-Planck evolution, kernels, controlled "
                 "potentials and particle ensembles."};
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    long grid_points = 0;
    double x_max = 0.0;
    double tol = 0.0;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "flat key = value scenario file")->required();
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    auto* grid_opt = app.add_option("--grid-points", grid_points, "grid points");
    auto* xmax_opt = app.add_option("--x-max", x_max, "truncation radius in units of sigma0");
    auto* tol_opt = app.add_option("--tolerance", tol, "pass/fail tolerance");
    app.add_option("--set", sets, "extra key=value overrides");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    ScenarioConfig c;
    try {
        c = load_config(config_path);
        if (*out_opt)
            c.out_dir = out_dir;
        if (*seed_opt)
            c.seed = seed;
        if (*grid_opt)
            c.set("grid_points", std::to_string(grid_points));
        if (*xmax_opt)
            c.set("x_max", format_double(x_max));
        if (*tol_opt)
            c.set("tolerance", format_double(tol));
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ConfigError(s, "--set expects key=value");
            c.set(s.substr(0, eq), s.substr(eq + 1));
        }
        validate(c);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    }

    const RunResult r = run(c, std::cerr);
    if (r.exit_code == exit_ok)
        std::cout << c.command << ": ok (" << c.out_dir << ")\n";
    return r.exit_code;
}
