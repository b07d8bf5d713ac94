// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "thetaflow/state.hpp"

namespace thetaflow {

/// Nonzero eigenvalues of the per-mode linear block, i.e. the roots of
/// lambda^2 + nu_q r^2 lambda + gamma r^2 = 0, plus the zero-eigenvalue
/// direction of the full 3x3 generator (always the pure-a axis).
/// lambda_plus is the root with the larger real part (the slow branch);
/// for a complex pair it carries the positive imaginary part.
struct LinearEigen {
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    std::array<double, 3> kernel;  // (a, b, v) components
};

LinearEigen lin_eigenvalues(double r, const FluidParams& params);

/// Exact flow of the linearized system over a fixed step: per mode the 3x3
/// exponential of
///   M(r) = [[0, 0, -r], [0, 0, -gamma r], [0, r, -nu_q r^2]]   (rows a, b, v)
/// acting on (a_hat, b_hat, v_hat) with v = Lambda^{-1} div u, and the heat
/// factor exp(-mu r^2 dt) on the divergence-free part of u.
///
/// The 2x2 (b, v) block is computed in closed form from its trace-free
/// splitting (cosh/sinh, or cos/sin in the oscillatory regime) with a series
/// evaluation of sinh(x)/x near the double root, so the formula is uniformly
/// accurate; the a-row follows by exact integration and preserves the kernel
/// component a_hat - b_hat/gamma to roundoff.
class LinearPropagator {
  public:
    LinearPropagator(GridPtr grid, const FluidParams& params, double dt);

    double dt() const { return dt_; }
    const GridPtr& grid() const { return grid_; }

    /// One exact linear step, in place.
    void apply(PerturbationState& s) const;

    /// Full 3x3 matrix exp(M(r) dt) in (a, b, v) ordering, closed form.
    std::array<double, 9> matrix3(double r) const;
    /// The generator M(r) itself (for dense-eigensolver cross-checks).
    static std::array<double, 9> generator(double r, const FluidParams& params);

  private:
    struct ModeExp {
        double bb, bv, vb, vv;  // exp of the (b, v) block
        double ab, av;          // a-row coupling to (b0, v0)
        double heat;            // exp(-mu r^2 dt)
    };
    static ModeExp mode_exp(double r, const FluidParams& params, double dt);

    GridPtr grid_;
    FluidParams params_;
    double dt_;
    std::vector<ModeExp> table_;
};

LinearPropagator build_linear_propagator(GridPtr grid, const FluidParams& params, double dt);

/// Keeps, per mode, only one eigencomponent of the (b, v) pair (the slow one
/// in the overdamped regime, a single rotating component in the oscillatory
/// regime), so every block norm of b decays as a clean exponential in the
/// linear flow. a is left untouched. Hermitian symmetry is preserved by
/// projecting one mode of each conjugate pair and mirroring.
void project_slow_eigencomponent(PerturbationState& s, const FluidParams& params);

}  // namespace thetaflow
