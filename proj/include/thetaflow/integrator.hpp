// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include "thetaflow/dynamics.hpp"
#include "thetaflow/filter_bank.hpp"
#include "thetaflow/propagator.hpp"

namespace thetaflow {

enum class Scheme { IFRK4, IFRK2, RK4 };

struct IntegratorConfig {
    double dt = 1e-3;
    double T = 10.0;
    double cfl_safety = 0.5;       // fraction in (0, 1]
    Scheme scheme = Scheme::IFRK4;
    int snapshot_interval = 10;    // steps between ledger samples / CFL checks
    double floor = kDensityFloor;
    double blowup_norm = 1e6;      // instantaneous Besov threshold

    void validate() const;
};

/// Exact linear flow over a step and its half, as the integrating-factor
/// schemes need both.
struct StepOperator {
    LinearPropagator full;
    LinearPropagator half;
    double dt;
};

StepOperator make_step_operator(GridPtr grid, const FluidParams& params, double dt);

/// One step of the requested scheme. Keeps a and b exactly zero-mean and the
/// state dealiased. Throws StateError if the density floor is violated at a
/// stage evaluation.
PerturbationState step(const PerturbationState& s, const StepOperator& op,
                       const FluidParams& params, Scheme scheme = Scheme::IFRK4,
                       double floor = kDensityFloor);

enum class Termination { Completed, Blowup };

struct RunSummary {
    PerturbationState state;  // final (or last valid, on blowup)
    double t = 0.0;
    long steps = 0;
    Termination status = Termination::Completed;
    std::string reason;
};

/// Called at t=0, every snapshot_interval accepted steps, and at the horizon.
using SnapshotCallback = std::function<void(const PerturbationState&, double t, long step)>;

/// Advance to config.T or blowup. The step size is min(config.dt, cfl_dt),
/// re-evaluated at snapshot boundaries (the propagators are rebuilt when it
/// changes); the final step is shortened to land exactly on T. Deterministic
/// for fixed inputs.
RunSummary run(const PerturbationState& initial, const IntegratorConfig& config,
               const FluidParams& params, const FilterBank* bank = nullptr,
               const SnapshotCallback& on_snapshot = {});

/// Advective step bound cfl_safety / (k_max |u|_max + eps) with k_max the
/// dealiasing cutoff per axis.
double cfl_dt(const PerturbationState& s, const Grid& grid, const IntegratorConfig& config);

/// Primitive-form oracle integrator: fully explicit RK4 with the integrating
/// factor applied to the constant-coefficient viscous operator only. rho and
/// rho*theta advance in divergence form, so their integrals are conserved to
/// roundoff.
PrimitiveState run_mm1(const PrimitiveState& initial, double dt, double T,
                       const FluidParams& params);

}  // namespace thetaflow
