// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/state.hpp"

#include <cmath>

#include "thetaflow/errors.hpp"
#include "thetaflow/ops.hpp"

namespace thetaflow {

void FluidParams::validate(int dim) const {
    if (!(mu > 0.0)) throw ConfigError("params: mu must be positive");
    if (!(dim * lambda + 2.0 * mu > 0.0))
        throw ConfigError("params: n*lambda + 2*mu must be positive");
    if (!(gamma > 1.0)) throw ConfigError("params: gamma must exceed 1");
    if (!(A > 0.0)) throw ConfigError("params: pressure constant A must be positive");
}

PrimitiveState PrimitiveState::equilibrium(const GridPtr& grid) {
    PrimitiveState s{SpectralField::scalar(grid), SpectralField::vector(grid),
                     SpectralField::scalar(grid)};
    s.rho.at(0, 0) = cplx(1.0, 0.0);
    s.theta.at(0, 0) = cplx(1.0, 0.0);
    return s;
}

PerturbationState PerturbationState::zero(const GridPtr& grid) {
    return {SpectralField::scalar(grid), SpectralField::vector(grid),
            SpectralField::scalar(grid)};
}

SpectralField pressure_law(const SpectralField& rho, const SpectralField& theta,
                           const FluidParams& params) {
    auto r = physical(rho);
    auto th = physical(theta);
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || !(th[i] > 0.0))
            throw StateError("pressure_law: nonpositive density or temperature");
        r[i] = params.A * std::pow(r[i] * th[i], params.gamma);
    }
    return from_physical(rho.grid(), r);
}

PressureState to_pressure_form(const PrimitiveState& s, const FluidParams& params) {
    return {s.rho, s.u, pressure_law(s.rho, s.theta, params)};
}

PerturbationState to_perturbation(const PressureState& s, double floor) {
    PerturbationState out{s.rho, s.u, s.P};
    out.a.at(0, 0) -= cplx(1.0, 0.0);
    out.b.at(0, 0) -= cplx(1.0, 0.0);
    double scale = std::max(1.0, out.a.l2_norm() + out.b.l2_norm());
    if (std::abs(out.a.mean()) > 1e-12 * scale || std::abs(out.b.mean()) > 1e-12 * scale)
        throw StateError("to_perturbation: background must satisfy the zero-mean convention");
    out.a.set_mean_zero();
    out.b.set_mean_zero();
    if (density_margin(out) <= floor)
        throw StateError("to_perturbation: density too close to vacuum");
    if (min_physical(out.b) <= -1.0)
        throw StateError("to_perturbation: nonpositive pressure");
    return out;
}

PressureState from_perturbation(const PerturbationState& s) {
    PressureState out{s.a, s.u, s.b};
    out.rho.at(0, 0) += cplx(1.0, 0.0);
    out.P.at(0, 0) += cplx(1.0, 0.0);
    return out;
}

PrimitiveState to_primitive(const PerturbationState& s, const FluidParams& params,
                            double floor) {
    if (density_margin(s) <= floor)
        throw StateError("to_primitive: density too close to vacuum");
    PressureState ps = from_perturbation(s);
    // theta from P = A (rho theta)^gamma, pointwise.
    auto p = physical(ps.P);
    auto rho = physical(ps.rho);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0)) throw StateError("to_primitive: nonpositive pressure");
        p[i] = std::pow(p[i] / params.A, 1.0 / params.gamma) / rho[i];
    }
    return {ps.rho, ps.u, from_physical(s.grid(), p)};
}

SpectralField rational_density_fn(const SpectralField& a, double floor) {
    auto v = physical(a);
    for (auto& x : v) {
        if (!(1.0 + x > floor))
            throw StateError("rational_density_fn: density below floor");
        x = x / (1.0 + x);
    }
    return from_physical(a.grid(), v);
}

std::pair<double, double> conserved_integrals(const PrimitiveState& s) {
    SpectralField m = multiply(s.rho, s.theta);
    return {integral(s.rho), integral(m)};
}

double density_margin(const PerturbationState& s) { return 1.0 + min_physical(s.a); }

}  // namespace thetaflow
