// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include "thetaflow/config.hpp"

namespace thetaflow {

/// Exit codes shared by every subcommand: 0 success, 1 configuration or
/// invariant error, 2 numerical blowup.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBlowup = 2;

struct RunOutputs {
    int exit_code = kExitOk;
    std::string reason = "completed";
    double E0 = 0.0;
    double max_E = 0.0;
    double fitted_C = 0.0;
};

/// Full simulation + ledger pipeline; writes energy.csv, blocks.csv,
/// rates.csv, constants.csv and final.thfl under config.outdir.
RunOutputs run_pipeline(const RunConfig& config, bool quiet = false);
int cmd_run(const RunConfig& config);

/// Dispersion relation over the grid's moduli + closed-form/dense agreement.
int cmd_linear(const RunConfig& config);

/// Invariant battery: partition of unity, reconstruction, projectors,
/// symbols, lemma probes, equation residuals, formulation consistency, and
/// (on tiny grids) the direct-summation transform oracle.
int cmd_check(const RunConfig& config, bool corrupt_bank = false);

/// Cartesian parameter sweep; grid_spec looks like
/// "amplitude=1e-3,1e-2;gamma=1.1,1.4". THETAFLOW_THREADS caps parallelism.
int cmd_sweep(const RunConfig& config, const std::string& grid_spec);

/// Block norms and Besov aggregates of a checkpoint, CSV on stdout.
int cmd_norms(const std::string& checkpoint_path, std::optional<double> s, int j0);

/// Canonical config echo (round-trip identity).
int cmd_dump(const RunConfig& config);

}  // namespace thetaflow
