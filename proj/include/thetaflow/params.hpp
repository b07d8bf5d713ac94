// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace thetaflow {

/// Fluid constants. Defaults are the normalized values mu=1, lambda=0, A=1.
struct FluidParams {
    double mu = 1.0;      // shear viscosity, > 0
    double lambda = 0.0;  // second viscosity, n*lambda + 2*mu > 0
    double gamma = 1.4;   // adiabatic index, > 1
    double A = 1.0;       // pressure constant, > 0

    /// Viscosity seen by the gradient (Q) part of the velocity.
    double nu_q() const { return lambda + 2.0 * mu; }

    /// Throws ConfigError when the physical restrictions fail.
    void validate(int dim) const;
};

}  // namespace thetaflow
