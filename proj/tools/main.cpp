#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pumped/commands.hpp"
#include "pumped/config.hpp"
#include "pumped/errors.hpp"

namespace {

// load + override the output directory, mapping failures to exit codes
int with_config(const std::string& path, const std::string& out_dir,
                const std::function<int(const pumped::RunConfig&)>& body) {
    try {
        pumped::RunConfig config = pumped::load_config(path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        return body(config);
    } catch (const pumped::ConfigError& e) {
        std::cerr << "config error: " << e.what();
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        std::cerr << "\n";
        return pumped::kExitConfig;
    } catch (const pumped::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        for (const std::string& f : e.failures) std::cerr << "  - " << f << "\n";
        return pumped::kExitValidation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "pumped: steady states, spectra and Lyapunov monotonicity for pumped, "
        "decaying quantum systems (d/dt rho = Lambda + L rho)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string param;
    double from = 0.0, to = 1.0;
    std::size_t steps = 2;
    double quad_step = 1e-3;

    CLI::App* run = app.add_subcommand("run", "simulate and write trajectory/Lyapunov tables");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--out", out_dir, "output directory (default from config)");

    CLI::App* spectrum =
        app.add_subcommand("spectrum", "eigenvalues, steady state and structural residuals");
    spectrum->add_option("--config", config_path, "config file")->required();

    CLI::App* sweep =
        app.add_subcommand("sweep", "steady-state population difference across a parameter");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--param", param, "two-level parameter name")->required();
    sweep->add_option("--from", from, "first value")->required();
    sweep->add_option("--to", to, "last value")->required();
    sweep->add_option("--steps", steps, "grid points")->required();
    sweep->add_option("--out", out_dir, "output directory (default from config)");

    CLI::App* ensemble = app.add_subcommand(
        "ensemble-verify", "check the accumulated injection ensemble against the generator");
    ensemble->add_option("--config", config_path, "config file")->required();
    ensemble->add_option("--quad-step", quad_step, "quadrature step (default 1e-3)");

    CLI::App* fixtures =
        app.add_subcommand("fixtures", "print the bundled regression table with deltas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pumped::kExitConfig;
    }

    if (run->parsed())
        return with_config(config_path, out_dir, [&](const pumped::RunConfig& c) {
            return pumped::cmd_run(c, std::cout, std::cerr);
        });
    if (spectrum->parsed())
        return with_config(config_path, out_dir, [&](const pumped::RunConfig& c) {
            return pumped::cmd_spectrum(c, std::cout, std::cerr);
        });
    if (sweep->parsed())
        return with_config(config_path, out_dir, [&](const pumped::RunConfig& c) {
            return pumped::cmd_sweep(c, param, from, to, steps, std::cout, std::cerr);
        });
    if (ensemble->parsed())
        return with_config(config_path, out_dir, [&](const pumped::RunConfig& c) {
            return pumped::cmd_ensemble_verify(c, quad_step, std::cout, std::cerr);
        });
    if (fixtures->parsed()) return pumped::cmd_fixtures(std::cout, std::cerr);
    return pumped::kExitConfig;
}
