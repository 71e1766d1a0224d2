// mhd1d: simulate, sweep and verify the 1D isentropic MHD solver.
#include <iostream>

#include <CLI11.hpp>

#include "mhd1d/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"1D compressible isentropic MHD: resistive and non-resistive runs, nu sweeps, verification"};
    app.set_version_flag("--version", std::string(MHD1D_VERSION));
    app.require_subcommand(1);

    mhd1d::CommandOptions opts;
    std::string output_dir;
    app.add_option("--output-dir", output_dir,
                   "Output directory (overrides $" + std::string(mhd1d::kOutputDirEnv) + " and the config)");

    auto* simulate = app.add_subcommand("simulate", "Run one configuration and write diagnostics");
    simulate->add_option("--config", opts.config_path, "Run configuration (JSON)")->required();

    auto* sweep = app.add_subcommand("sweep", "Resistive/non-resistive pairs over the config's nu_list");
    sweep->add_option("--config", opts.config_path, "Run configuration (JSON)")->required();
    sweep->add_option("--jobs", opts.jobs, "Pairs run concurrently")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Built-in verification battery");

    // Options given after the subcommand name are accepted too.
    for (auto* sub : {simulate, sweep, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? mhd1d::kExitOk : mhd1d::kExitUsage;
    }
    if (!output_dir.empty()) opts.output_dir = output_dir;

    try {
        if (*simulate) return mhd1d::cmd_simulate(opts, std::cout, std::cerr);
        if (*sweep) return mhd1d::cmd_sweep(opts, std::cout, std::cerr);
        if (*verify) return mhd1d::cmd_verify(std::cout, std::cerr);
    } catch (const std::exception& ex) {
        std::cerr << "io error: " << ex.what() << "\n";
        return mhd1d::kExitIo;
    }
    return mhd1d::kExitUsage;
}
