#include "pflow/config.hpp"
#include "pflow/errors.hpp"
#include "pflow/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference solver and verification harness for the "
                 "regularized singular diffusion flow"};
    app.require_subcommand(0);

    std::string experiment;
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;

    app.add_option("experiment", experiment,
                   "one of: solve, verify, sweep-p, steady, energy-suite, "
                   "order-study")
        ->required();
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", overrides, "key=value override (highest precedence)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "error: cannot open config file " << config_path << '\n';
                return 2;
            }
            std::ostringstream buffer;
            buffer << in.rdbuf();
            text = buffer.str();
        }
        const pflow::RunManifest manifest = pflow::parse_config(
            text, overrides, pflow::experiment_from_name(experiment));
        return pflow::run_experiment(manifest, out_dir);
    } catch (const pflow::ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
