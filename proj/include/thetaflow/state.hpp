// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "thetaflow/field.hpp"
#include "thetaflow/params.hpp"

namespace thetaflow {

/// Default lower bound on 1+a (and on rho): "bounded away from vacuum".
inline constexpr double kDensityFloor = 0.1;

/// (rho, u, theta): density, velocity, potential temperature.
struct PrimitiveState {
    SpectralField rho, u, theta;
    static PrimitiveState equilibrium(const GridPtr& grid);
};

/// (rho, u, P): density, velocity, pressure.
struct PressureState {
    SpectralField rho, u, P;
};

/// (a, u, b) with rho = 1 + a, P = 1 + b; a and b are zero-mean.
struct PerturbationState {
    SpectralField a, u, b;
    static PerturbationState zero(const GridPtr& grid);
    const GridPtr& grid() const { return a.grid(); }
};

/// P = A (rho theta)^gamma, evaluated pointwise. Inputs must be positive.
SpectralField pressure_law(const SpectralField& rho, const SpectralField& theta,
                           const FluidParams& params);

PressureState to_pressure_form(const PrimitiveState& s, const FluidParams& params);

/// rho = 1 + a, P = 1 + b. Rejects states violating the zero-mean convention
/// or the density floor.
PerturbationState to_perturbation(const PressureState& s, double floor = kDensityFloor);

PressureState from_perturbation(const PerturbationState& s);

/// Primitive state equivalent to (a, u, b): rho = 1+a, theta recovered from
/// the pressure law.
PrimitiveState to_primitive(const PerturbationState& s, const FluidParams& params,
                            double floor = kDensityFloor);

/// I(a) = a / (1 + a), pointwise. Requires min(1+a) > floor.
SpectralField rational_density_fn(const SpectralField& a, double floor = kDensityFloor);

/// Grid quadrature of (integral rho, integral rho*theta).
std::pair<double, double> conserved_integrals(const PrimitiveState& s);

/// min over collocation points of 1 + a.
double density_margin(const PerturbationState& s);

}  // namespace thetaflow
