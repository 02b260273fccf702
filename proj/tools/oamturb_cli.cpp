// Command-line front end: concurrence sweeps, parameter reports, self-checks.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oamturb/errors.hpp"
#include "oamturb/sweep.hpp"
#include "oamturb/verify.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw oamturb::ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entangled OAM photon pairs through atmospheric turbulence"};
    app.require_subcommand(1);

    auto* sweep_cmd = app.add_subcommand("sweep", "Write a concurrence curve as CSV");
    std::string config_path, q_text, scenario_text, K_text, W_text, out_path;
    sweep_cmd->add_option("--config", config_path, "key=value configuration file");
    sweep_cmd->add_option("--q", q_text, "OAM index magnitude (1, 2 or 3)");
    sweep_cmd->add_option("--scenario", scenario_text,
                          "correlated | uncorrelated | sps-correlated | sps-uncorrelated");
    sweep_cmd->add_option("--K", K_text, "comma-separated K values");
    sweep_cmd->add_option("--W", W_text, "W grid as min:max:count");
    sweep_cmd->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* params_cmd = app.add_subcommand("params", "Report the dimensionless turbulence parameters");
    std::vector<std::pair<std::string, std::string>> physical;
    std::string cn2, lambda, waist, z, crystal_length, ordinary_index;
    params_cmd->add_option("--cn2", cn2, "refractive index structure constant [m^-2/3]")->required();
    params_cmd->add_option("--lambda", lambda, "wavelength [m]")->required();
    params_cmd->add_option("--waist", waist, "beam waist [m]")->required();
    params_cmd->add_option("--z", z, "propagation distance [m]")->required();
    params_cmd->add_option("--L", crystal_length, "crystal length [m]");
    params_cmd->add_option("--no", ordinary_index, "ordinary refractive index");

    auto* verify_cmd = app.add_subcommand("verify", "Run the numerical self-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*sweep_cmd) {
            oamturb::sweep::SweepConfig config;
            if (!config_path.empty()) config = oamturb::sweep::parse_config_text(read_file(config_path));
            if (!q_text.empty()) oamturb::sweep::apply_setting(config, "q", q_text);
            if (!scenario_text.empty()) oamturb::sweep::apply_setting(config, "scenario", scenario_text);
            if (!K_text.empty()) oamturb::sweep::apply_setting(config, "K", K_text);
            if (!W_text.empty()) oamturb::sweep::apply_setting(config, "W", W_text);
            if (!out_path.empty()) oamturb::sweep::apply_setting(config, "out", out_path);
            oamturb::sweep::validate(config);

            const auto rows = oamturb::sweep::run_sweep(config);
            if (config.output_path.empty()) {
                oamturb::sweep::write_csv(std::cout, rows);
            } else {
                std::ofstream out(config.output_path, std::ios::binary);
                if (!out) throw oamturb::ConfigError("out: cannot open '" + config.output_path + "'");
                oamturb::sweep::write_csv(out, rows);
                if (!out) throw oamturb::ConfigError("out: write failed");
            }
        } else if (*params_cmd) {
            physical = {{"cn2", cn2}, {"lambda", lambda}, {"waist", waist}, {"z", z}};
            if (!crystal_length.empty()) physical.emplace_back("L", crystal_length);
            if (!ordinary_index.empty()) physical.emplace_back("no", ordinary_index);
            std::cout << oamturb::sweep::report_params(physical);
        } else if (*verify_cmd) {
            bool all = true;
            for (const auto& check : oamturb::verify::run_all()) {
                std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
                all = all && check.passed;
            }
            return all ? 0 : kNumericalError;
        }
    } catch (const oamturb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const oamturb::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfigError;
    } catch (const oamturb::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    }
    return 0;
}
