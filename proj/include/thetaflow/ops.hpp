// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "thetaflow/field.hpp"

namespace thetaflow {

// ---- symbol-defined operators -------------------------------------------

/// Coefficient at k multiplied by i*k_axis.
SpectralField derivative(const SpectralField& f, int axis);

/// Gradient of a scalar: vector field with components d_axis f.
SpectralField gradient(const SpectralField& f);

/// Divergence of a vector field.
SpectralField divergence(const SpectralField& u);

/// Lambda^s: coefficient multiplied by |k|^s; zero mode mapped to 0 for s != 0.
/// For s < 0 the input must be zero-mean.
SpectralField fractional_laplacian(const SpectralField& f, double s);

/// Delta^{-1}: coefficient multiplied by -1/|k|^2 off the zero mode.
/// Requires zero-mean input.
SpectralField inverse_laplacian(const SpectralField& f);

/// Helmholtz split u = Pu + Qu with P = I - grad Delta^{-1} div.
/// The zero mode is assigned entirely to Pu.
struct HelmholtzParts {
    SpectralField p;  // divergence-free part
    SpectralField q;  // gradient part
};
HelmholtzParts helmholtz(const SpectralField& u);
SpectralField leray_project(const SpectralField& u);     // Pu
SpectralField gradient_project(const SpectralField& u);  // Qu

/// Lame operator mu*Delta u + (lambda+mu) grad div u.
/// Enforces mu > 0 and n*lambda + 2*mu > 0.
SpectralField lame_operator(const SpectralField& u, double mu, double lambda);

/// Two-thirds rule truncation (see Grid::dealias_keep). Idempotent.
SpectralField dealias(const SpectralField& f);
void dealias_inplace(SpectralField& f);

// ---- physical-space evaluation -------------------------------------------

/// Collocation values of component c (real part).
std::vector<double> physical(const SpectralField& f, int c = 0);

/// Build a scalar field from collocation values.
SpectralField from_physical(const GridPtr& grid, std::span<const double> values);

/// Pointwise product of two scalar components, dealiased.
SpectralField multiply(const SpectralField& f, const SpectralField& g);

/// Apply fn pointwise to the collocation values of a scalar field.
/// Non-polynomial nonlinearities go through here; callers keep the active
/// spectrum well below the dealiasing cutoff to bound aliasing error.
SpectralField map_physical(const SpectralField& f, const std::function<double(double)>& fn);

/// min over collocation points of the scalar field's values.
double min_physical(const SpectralField& f);
double max_abs_physical(const SpectralField& f);

/// L2 norm computed from collocation values (quadrature route, for tests).
double l2_norm_physical(const SpectralField& f);

}  // namespace thetaflow
