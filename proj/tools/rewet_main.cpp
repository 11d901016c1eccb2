// Command-line front end for the re-wetting simulator.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rewet/io.hpp"

namespace {

void add_common_options(CLI::App* cmd, rewet::RunOptions& opt,
                        std::vector<std::string>& sets) {
    cmd->add_option("--preset", opt.preset_name, "Parameter preset name")
        ->default_val("base");
    cmd->add_option("--config", opt.config_path,
                    "Config file merged over the preset");
    cmd->add_option("--set", sets, "Override key=value (repeatable)");
    cmd->add_option("--out", opt.out_dir, "Output directory")->default_val(".");
    cmd->add_option("--grid", opt.grid_n, "Number of grid cells")
        ->default_val(100);
    cmd->add_option("--t-end", opt.t_end, "End time in days")->default_val(28.0);
    cmd->add_option("--rtol", opt.rtol, "Relative tolerance")
        ->default_val(1e-8);
    cmd->add_option("--atol", opt.atol, "Absolute tolerance")
        ->default_val(1e-8);
}

int parse_sets(const std::vector<std::string>& sets, rewet::RunOptions& opt) {
    for (const auto& kv : sets) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "config error: --set expects key=value, got '" << kv
                      << "'\n";
            return rewet::kConfigError;
        }
        opt.overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return rewet::kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D reactive porous-transport simulator for concrete re-wetting"};
    app.require_subcommand(1);

    rewet::RunOptions opt;
    std::vector<std::string> sets;
    std::string campaign_path;

    CLI::App* run = app.add_subcommand("run", "Run one scenario");
    add_common_options(run, opt, sets);
    run->add_flag("--dump-config", opt.dump_config,
                  "Print the resolved config and exit");

    CLI::App* sweep = app.add_subcommand("sweep", "Run a scenario campaign");
    sweep->add_option("campaign", campaign_path, "Campaign description file")
        ->required();
    add_common_options(sweep, opt, sets);

    CLI::App* refine =
        app.add_subcommand("refine", "Grid refinement convergence study");
    add_common_options(refine, opt, sets);

    app.add_subcommand("presets", "List available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : rewet::kConfigError;
    }

    int rc = parse_sets(sets, opt);
    if (rc != rewet::kOk) return rc;

    try {
        if (run->parsed()) return rewet::cmd_run(opt);
        if (sweep->parsed()) return rewet::cmd_sweep(campaign_path, opt);
        if (refine->parsed()) return rewet::cmd_refine(opt);
        return rewet::cmd_presets();
    } catch (const rewet::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return rewet::kIoFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return rewet::kSolverError;
    }
}
