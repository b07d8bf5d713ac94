// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "thetaflow/state.hpp"

namespace thetaflow {

/// Tendencies of the perturbation system:
///   da = -div u - u.grad a - a div u
///   du = -u.grad u + Lame(u) - grad b + I(a) grad b - I(a) Lame(u)
///   db = -gamma div u - u.grad b - gamma b div u
struct Mm3Tendency {
    SpectralField da, du, db;
};

Mm3Tendency rhs_mm3(const PerturbationState& s, const FluidParams& params,
                    double floor = kDensityFloor);

/// Nonlinear part only (rhs_mm3 minus its linearization at the origin); this
/// is what the integrating-factor scheme advances explicitly.
Mm3Tendency rhs_mm3_nonlinear(const PerturbationState& s, const FluidParams& params,
                              double floor = kDensityFloor);

/// Tendencies of the primitive system in conservation variables. The third
/// slot is the tendency of the conserved product rho*theta (theta itself is
/// recovered by pointwise division).
struct Mm1Tendency {
    SpectralField d_rho, d_u, d_rho_theta;
};

Mm1Tendency rhs_mm1(const PrimitiveState& s, const FluidParams& params);

/// F(a,u,b) = I(a) grad b - I(a) Lame(u).
SpectralField nonlinear_force(const SpectralField& a, const SpectralField& u,
                              const SpectralField& b, const FluidParams& params,
                              double floor = kDensityFloor);

/// phi = gamma a - b.
SpectralField good_unknown_phi(const SpectralField& a, const SpectralField& b,
                               const FluidParams& params);

/// v = Lambda^{-1} div u (compressible scalar; ||v|| = ||Qu||).
SpectralField compressible_scalar(const SpectralField& u);

/// G = Qu - (1/nu_q) Delta^{-1} grad b.
SpectralField effective_velocity(const SpectralField& u, const SpectralField& b,
                                 const FluidParams& params);

/// f1 = -u.grad b - gamma b div u,  f2 = Lambda^{-1} div(-u.grad u + F).
std::pair<SpectralField, SpectralField> low_freq_sources(const PerturbationState& s,
                                                         const FluidParams& params,
                                                         double floor = kDensityFloor);

/// Residual of a transport/balance law on a pair of consecutive snapshots,
/// midpoint time differencing. relative() is the residual scaled by the
/// trajectory amplitude (scale_l2), so a clean trajectory scores O(dt^2)
/// and mismatched snapshots score >> 1.
struct ResidualReport {
    double residual_l2 = 0.0;
    double scale_l2 = 0.0;
    bool supported = true;  // false when the check does not apply (nu_q != 2)
    double relative() const { return scale_l2 > 1e-300 ? residual_l2 / scale_l2 : 0.0; }
};

/// d/dt phi + u.grad phi + gamma (a-b) div u = 0.
ResidualReport residual_phi_equation(const PerturbationState& s1, const PerturbationState& s2,
                                     double dt, const FluidParams& params,
                                     double floor = kDensityFloor);

/// Parabolic equation of the effective velocity at nu_q = 2:
///   d/dt G - 2 Delta G = (gamma/2) G + (gamma/4) Delta^{-1} grad b
///     + (1/2) Q(b u) + ((gamma-1)/2) Delta^{-1} grad(b div u)
///     - Q(u.grad u) + Q F(a,u,b).
/// For nu_q != 2 the report is returned with supported = false.
ResidualReport residual_G_equation(const PerturbationState& s1, const PerturbationState& s2,
                                   double dt, const FluidParams& params,
                                   double floor = kDensityFloor);

}  // namespace thetaflow
