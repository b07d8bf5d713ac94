// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/propagator.hpp"

#include <cmath>

#include "thetaflow/errors.hpp"

namespace thetaflow {

namespace {

double sinhc(double x) {
    if (std::abs(x) < 1e-5) {
        double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

double sinc(double x) {
    if (std::abs(x) < 1e-5) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

}  // namespace

LinearEigen lin_eigenvalues(double r, const FluidParams& params) {
    if (!(r > 0.0)) throw PreconditionError("lin_eigenvalues: r must be positive");
    double nu = params.nu_q();
    double g = params.gamma;
    double half_trace = -0.5 * nu * r * r;
    double disc = nu * nu * std::pow(r, 4) - 4.0 * g * r * r;
    LinearEigen out;
    out.kernel = {1.0, 0.0, 0.0};
    if (disc >= 0.0) {
        double sq = 0.5 * std::sqrt(disc);
        out.lambda_plus = {half_trace + sq, 0.0};
        out.lambda_minus = {half_trace - sq, 0.0};
    } else {
        double sq = 0.5 * std::sqrt(-disc);
        out.lambda_plus = {half_trace, sq};
        out.lambda_minus = {half_trace, -sq};
    }
    return out;
}

LinearPropagator::ModeExp LinearPropagator::mode_exp(double r, const FluidParams& params,
                                                     double dt) {
    if (r == 0.0) return {1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
    double nu = params.nu_q();
    double g = params.gamma;
    // (b, v) block A = [[0, -g r], [r, -nu r^2]] = m I + B with tracefree B,
    // B^2 = delta I.
    double m = -0.5 * nu * r * r;
    double b11 = -m, b12 = -g * r, b21 = r, b22 = m;
    double delta = m * m - g * r * r;  // (tr/2)^2 - det
    double c, s;
    if (delta >= 0.0) {
        double w = std::sqrt(delta);
        c = std::cosh(w * dt);
        s = dt * sinhc(w * dt);
    } else {
        double w = std::sqrt(-delta);
        c = std::cos(w * dt);
        s = dt * sinc(w * dt);
    }
    double em = std::exp(m * dt);
    ModeExp e;
    e.bb = em * (c + s * b11);
    e.bv = em * s * b12;
    e.vb = em * s * b21;
    e.vv = em * (c + s * b22);
    // a(t) = a0 + (1/g) ((E_bb - 1) b0 + E_bv v0): exact integral of -r v,
    // using that the a-row of the generator is -(1/g) times the b-row.
    e.ab = (e.bb - 1.0) / g;
    e.av = e.bv / g;
    e.heat = std::exp(-params.mu * r * r * dt);
    return e;
}

LinearPropagator::LinearPropagator(GridPtr grid, const FluidParams& params, double dt)
    : grid_(std::move(grid)), params_(params), dt_(dt) {
    if (!(dt >= 0.0)) throw PreconditionError("propagator: dt must be nonnegative");
    params_.validate(grid_->dim());
    table_.reserve(grid_->size());
    for (std::size_t i = 0; i < grid_->size(); ++i)
        table_.push_back(mode_exp(grid_->modulus(i), params_, dt_));
}

LinearPropagator build_linear_propagator(GridPtr grid, const FluidParams& params, double dt) {
    return LinearPropagator(std::move(grid), params, dt);
}

std::array<double, 9> LinearPropagator::matrix3(double r) const {
    ModeExp e = mode_exp(r, params_, dt_);
    return {1.0, e.ab, e.av, 0.0, e.bb, e.bv, 0.0, e.vb, e.vv};
}

std::array<double, 9> LinearPropagator::generator(double r, const FluidParams& params) {
    double nu = params.nu_q();
    return {0.0, 0.0, -r, 0.0, 0.0, -params.gamma * r, 0.0, r, -nu * r * r};
}

void LinearPropagator::apply(PerturbationState& s) const {
    const auto& g = *grid_;
    const int n = g.dim();
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.modulus(i);
        const ModeExp& e = table_[i];
        if (r == 0.0) continue;
        cplx kdotu(0.0, 0.0);
        for (int d = 0; d < n; ++d) kdotu += g.deriv_wavenumber(i, d) * s.u.at(d, i);
        cplx v = cplx(0.0, 1.0) * kdotu / r;
        cplx a = s.a.at(0, i);
        cplx b = s.b.at(0, i);
        cplx a1 = a + e.ab * b + e.av * v;
        cplx b1 = e.bb * b + e.bv * v;
        cplx v1 = e.vb * b + e.vv * v;
        s.a.at(0, i) = a1;
        s.b.at(0, i) = b1;
        // u = heat * Pu + Qu(v1), with Qu = -i v k/|k|
        for (int d = 0; d < n; ++d) {
            double kd = g.deriv_wavenumber(i, d);
            cplx qu = kd * kdotu / (r * r);
            cplx pu = s.u.at(d, i) - qu;
            s.u.at(d, i) = e.heat * pu + cplx(0.0, -1.0) * v1 * (kd / r);
        }
    }
}

void project_slow_eigencomponent(PerturbationState& s, const FluidParams& params) {
    const auto& g = *s.grid();
    const int n = g.dim();
    double nu = params.nu_q();
    double ga = params.gamma;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.modulus(i);
        if (r == 0.0) continue;
        std::size_t ci = g.conj_index(i);
        if (ci < i) continue;  // canonical representative handles the pair
        cplx kdotu(0.0, 0.0);
        for (int d = 0; d < n; ++d) kdotu += g.deriv_wavenumber(i, d) * s.u.at(d, i);
        cplx v = cplx(0.0, 1.0) * kdotu / r;
        cplx b = s.b.at(0, i);
        if (ci == i) continue;  // self-conjugate mode: leave both components

        // Eigenvectors of [[0,-g r],[r,-nu r^2]] are w(lambda) = (g r, -lambda).
        LinearEigen eig = lin_eigenvalues(r, params);
        std::complex<double> lp = eig.lambda_plus, lm = eig.lambda_minus;
        if (std::abs(lp - lm) < 1e-12 * nu * r * r) continue;  // defective: skip
        // Solve (b, v) = cp (g r, -lp) + cm (g r, -lm); keep the plus branch.
        std::complex<double> cp = (v + (b / (ga * r)) * lm) / (lm - lp);
        cplx b_new = cp * ga * r;
        cplx v_new = cp * (-lp);
        s.b.at(0, i) = b_new;
        s.b.at(0, ci) = std::conj(b_new);
        // Write v back into the gradient part of u; Pu untouched.
        for (int d = 0; d < n; ++d) {
            double kd = g.deriv_wavenumber(i, d);
            cplx qu_old = kd * kdotu / (r * r);
            cplx qu_new = cplx(0.0, -1.0) * v_new * (kd / r);
            s.u.at(d, i) += qu_new - qu_old;
            s.u.at(d, ci) = std::conj(s.u.at(d, i));
        }
    }
}

}  // namespace thetaflow
