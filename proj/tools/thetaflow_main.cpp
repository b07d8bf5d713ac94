// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "thetaflow/cli.hpp"
#include "thetaflow/errors.hpp"

using namespace thetaflow;

int main(int argc, char** argv) {
    CLI::App app{"thetaflow: pseudo-spectral compressible flow with a frequency-split "
                 "energy ledger"};
    app.require_subcommand(1);

    std::string config_path, grid_spec, checkpoint_path;
    bool corrupt_bank = false;
    std::optional<double> norm_s;
    int norms_j0 = 1;

    auto* run = app.add_subcommand("run", "simulate and write the energy ledger CSVs");
    run->add_option("config", config_path, "config file")->required();

    auto* linear = app.add_subcommand("linear", "dispersion relation of the linear system");
    linear->add_option("config", config_path, "config file")->required();

    auto* check = app.add_subcommand("check", "invariant and residual battery");
    check->add_option("config", config_path, "config file")->required();
    check->add_flag("--corrupt-bank", corrupt_bank,
                    "negative control: corrupt the filter bank first");

    auto* sweep = app.add_subcommand("sweep", "run a cartesian parameter grid");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--grid", grid_spec, "axes, e.g. \"amplitude=1e-3,1e-2;gamma=1.1,1.4\"")
        ->required();

    auto* norms = app.add_subcommand("norms", "block norms of a checkpoint (CSV on stdout)");
    norms->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();
    norms->add_option("--s", norm_s, "extra Besov regularity to report");
    norms->add_option("--j0", norms_j0, "low/high split index (default 1)");

    auto* dump = app.add_subcommand("dump", "echo the canonical form of a config");
    dump->add_option("config", config_path, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(parse_config(config_path));
        if (linear->parsed()) return cmd_linear(parse_config(config_path));
        if (check->parsed()) return cmd_check(parse_config(config_path), corrupt_bank);
        if (sweep->parsed()) return cmd_sweep(parse_config(config_path), grid_spec);
        if (norms->parsed()) return cmd_norms(checkpoint_path, norm_s, norms_j0);
        if (dump->parsed()) return cmd_dump(parse_config(config_path));
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
