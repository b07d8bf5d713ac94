// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/integrator.hpp"

#include <cmath>
#include <optional>

#include "thetaflow/errors.hpp"
#include "thetaflow/norms.hpp"
#include "thetaflow/ops.hpp"

namespace thetaflow {

void IntegratorConfig::validate() const {
    if (!(dt > 0.0)) throw ConfigError("integrator: dt must be positive");
    if (!(T >= dt || T == 0.0))
        throw ConfigError("integrator: horizon must be 0 or at least one step");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
        throw ConfigError("integrator: cfl_safety must lie in (0, 1]");
    if (snapshot_interval < 1) throw ConfigError("integrator: snapshot_interval must be >= 1");
}

StepOperator make_step_operator(GridPtr grid, const FluidParams& params, double dt) {
    return {LinearPropagator(grid, params, dt), LinearPropagator(grid, params, 0.5 * dt), dt};
}

namespace {

PerturbationState& axpy_state(PerturbationState& s, double alpha, const Mm3Tendency& k) {
    s.a.axpy(alpha, k.da);
    s.u.axpy(alpha, k.du);
    s.b.axpy(alpha, k.db);
    return s;
}

void finalize(PerturbationState& s) {
    // a's mean is conserved exactly by the divergence structure; b's zero
    // mode carries the genuine O(amplitude^2) drift of the pressure mean.
    s.a.set_mean_zero();
}

PerturbationState step_ifrk4(const PerturbationState& s, const StepOperator& op,
                             const FluidParams& params, double floor) {
    const double h = op.dt;
    Mm3Tendency k1 = rhs_mm3_nonlinear(s, params, floor);

    PerturbationState za = s;
    axpy_state(za, 0.5 * h, k1);
    op.half.apply(za);
    Mm3Tendency k2 = rhs_mm3_nonlinear(za, params, floor);

    PerturbationState zb = s;
    op.half.apply(zb);
    axpy_state(zb, 0.5 * h, k2);
    Mm3Tendency k3 = rhs_mm3_nonlinear(zb, params, floor);

    PerturbationState zc = s;
    op.full.apply(zc);
    PerturbationState k3prop = PerturbationState{k3.da, k3.du, k3.db};
    op.half.apply(k3prop);
    zc.a.axpy(h, k3prop.a);
    zc.u.axpy(h, k3prop.u);
    zc.b.axpy(h, k3prop.b);
    Mm3Tendency k4 = rhs_mm3_nonlinear(zc, params, floor);

    PerturbationState out = s;
    op.full.apply(out);
    PerturbationState k1prop = PerturbationState{k1.da, k1.du, k1.db};
    op.full.apply(k1prop);
    PerturbationState k2prop = PerturbationState{k2.da, k2.du, k2.db};
    op.half.apply(k2prop);
    out.a.axpy(h / 6.0, k1prop.a);
    out.u.axpy(h / 6.0, k1prop.u);
    out.b.axpy(h / 6.0, k1prop.b);
    out.a.axpy(h / 3.0, k2prop.a);
    out.u.axpy(h / 3.0, k2prop.u);
    out.b.axpy(h / 3.0, k2prop.b);
    out.a.axpy(h / 3.0, k3prop.a);
    out.u.axpy(h / 3.0, k3prop.u);
    out.b.axpy(h / 3.0, k3prop.b);
    out.a.axpy(h / 6.0, k4.da);
    out.u.axpy(h / 6.0, k4.du);
    out.b.axpy(h / 6.0, k4.db);
    finalize(out);
    return out;
}

PerturbationState step_ifrk2(const PerturbationState& s, const StepOperator& op,
                             const FluidParams& params, double floor) {
    const double h = op.dt;
    Mm3Tendency k1 = rhs_mm3_nonlinear(s, params, floor);
    PerturbationState za = s;
    axpy_state(za, 0.5 * h, k1);
    op.half.apply(za);
    Mm3Tendency k2 = rhs_mm3_nonlinear(za, params, floor);
    PerturbationState out = s;
    op.full.apply(out);
    PerturbationState k2prop = PerturbationState{k2.da, k2.du, k2.db};
    op.half.apply(k2prop);
    out.a.axpy(h, k2prop.a);
    out.u.axpy(h, k2prop.u);
    out.b.axpy(h, k2prop.b);
    finalize(out);
    return out;
}

PerturbationState step_rk4(const PerturbationState& s, double h, const FluidParams& params,
                           double floor) {
    Mm3Tendency k1 = rhs_mm3(s, params, floor);
    PerturbationState za = s;
    axpy_state(za, 0.5 * h, k1);
    Mm3Tendency k2 = rhs_mm3(za, params, floor);
    PerturbationState zb = s;
    axpy_state(zb, 0.5 * h, k2);
    Mm3Tendency k3 = rhs_mm3(zb, params, floor);
    PerturbationState zc = s;
    axpy_state(zc, h, k3);
    Mm3Tendency k4 = rhs_mm3(zc, params, floor);
    PerturbationState out = s;
    axpy_state(out, h / 6.0, k1);
    axpy_state(out, h / 3.0, k2);
    axpy_state(out, h / 3.0, k3);
    axpy_state(out, h / 6.0, k4);
    finalize(out);
    return out;
}

}  // namespace

PerturbationState step(const PerturbationState& s, const StepOperator& op,
                       const FluidParams& params, Scheme scheme, double floor) {
    switch (scheme) {
        case Scheme::IFRK4: return step_ifrk4(s, op, params, floor);
        case Scheme::IFRK2: return step_ifrk2(s, op, params, floor);
        case Scheme::RK4: return step_rk4(s, op.dt, params, floor);
    }
    throw ConfigError("step: unknown scheme");
}

double cfl_dt(const PerturbationState& s, const Grid& grid, const IntegratorConfig& config) {
    double umax = max_abs_physical(s.u);
    return config.cfl_safety / (grid.dealias_cutoff() * umax + 1e-30);
}

RunSummary run(const PerturbationState& initial, const IntegratorConfig& config,
               const FluidParams& params, const FilterBank* bank,
               const SnapshotCallback& on_snapshot) {
    config.validate();
    params.validate(initial.grid()->dim());
    const auto& grid = initial.grid();

    PerturbationState state = initial;
    dealias_inplace(state.a);
    dealias_inplace(state.u);
    dealias_inplace(state.b);
    // a is zero-mean by convention and stays so; b's zero mode is dynamical
    // (resumed states carry the accumulated pressure-mean drift).
    state.a.set_mean_zero();

    RunSummary summary{state, 0.0, 0, Termination::Completed, "reached horizon"};

    auto check_health = [&](const PerturbationState& s) -> std::string {
        if (s.a.has_nan() || s.u.has_nan() || s.b.has_nan()) return "non-finite coefficients";
        if (bank) {
            double n = grid->dim();
            double inst = besov_norm(*bank, s.a, 0.5 * n - 1.0) +
                          besov_norm(*bank, s.b, 0.5 * n - 1.0) +
                          besov_norm(*bank, s.u, 0.5 * n - 1.0);
            if (!(inst < config.blowup_norm)) return "Besov norm above blowup threshold";
        }
        return {};
    };

    if (auto why = check_health(state); !why.empty()) {
        summary.status = Termination::Blowup;
        summary.reason = why;
        return summary;
    }
    if (on_snapshot) on_snapshot(state, 0.0, 0);

    double t = 0.0;
    long steps = 0;
    double dt_block = std::min(config.dt, cfl_dt(state, *grid, config));
    StepOperator op = make_step_operator(grid, params, dt_block);

    while (t < config.T - 1e-12 * config.T) {
        if (steps > 0 && steps % config.snapshot_interval == 0) {
            double dt_new = std::min(config.dt, cfl_dt(state, *grid, config));
            if (dt_new != dt_block) {
                dt_block = dt_new;
                op = make_step_operator(grid, params, dt_block);
            }
        }
        // Snap near-dt remainders to a full step so that resuming from a
        // checkpoint reproduces the step schedule exactly despite the
        // floating accumulation of t.
        double remaining = config.T - t;
        double dt_step = dt_block;
        const StepOperator* active = &op;
        std::optional<StepOperator> tail;
        if (remaining < dt_block * (1.0 - 1e-9)) {
            dt_step = remaining;
            tail.emplace(make_step_operator(grid, params, dt_step));
            active = &*tail;
        }

        PerturbationState next = state;
        try {
            next = step(state, *active, params, config.scheme, config.floor);
        } catch (const StateError& e) {
            summary.status = Termination::Blowup;
            summary.reason = e.what();
            summary.state = state;
            summary.t = t;
            summary.steps = steps;
            return summary;
        }
        if (auto why = check_health(next); !why.empty()) {
            summary.status = Termination::Blowup;
            summary.reason = why;
            summary.state = state;
            summary.t = t;
            summary.steps = steps;
            return summary;
        }
        state = std::move(next);
        t += dt_step;
        ++steps;
        bool at_horizon = t >= config.T - 1e-12 * config.T;
        if (on_snapshot && (steps % config.snapshot_interval == 0 || at_horizon))
            on_snapshot(state, t, steps);
    }

    summary.state = std::move(state);
    summary.t = t;
    summary.steps = steps;
    return summary;
}

// ---- primitive-form oracle ------------------------------------------------

namespace {

// Exact flow of the constant-coefficient viscous operator: heat factors on
// the Helmholtz parts of u.
struct ViscousPhase {
    std::vector<double> p_factor, q_factor;

    ViscousPhase(const Grid& g, const FluidParams& params, double dt) {
        p_factor.resize(g.size());
        q_factor.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            double r2 = g.modulus(i) * g.modulus(i);
            p_factor[i] = std::exp(-params.mu * r2 * dt);
            q_factor[i] = std::exp(-params.nu_q() * r2 * dt);
        }
    }

    void apply(SpectralField& u, const Grid& g) const {
        const int n = g.dim();
        for (std::size_t i = 0; i < g.size(); ++i) {
            double r = g.modulus(i);
            if (r == 0.0) continue;
            cplx kdotu(0.0, 0.0);
            for (int d = 0; d < n; ++d) kdotu += g.deriv_wavenumber(i, d) * u.at(d, i);
            for (int d = 0; d < n; ++d) {
                cplx qu = g.deriv_wavenumber(i, d) * kdotu / (r * r);
                u.at(d, i) = p_factor[i] * (u.at(d, i) - qu) + q_factor[i] * qu;
            }
        }
    }
};

struct Mm1State {
    SpectralField rho, u, m;  // m = rho * theta
};

Mm1State to_conserved(const PrimitiveState& s) {
    return {s.rho, s.u, multiply(s.rho, s.theta)};
}

PrimitiveState to_primitive_vars(const Mm1State& s) {
    auto rho_p = physical(s.rho);
    auto m_p = physical(s.m);
    for (std::size_t i = 0; i < rho_p.size(); ++i) {
        if (!(rho_p[i] > 0.0)) throw StateError("run_mm1: density positivity lost");
        m_p[i] /= rho_p[i];
    }
    return {s.rho, s.u, from_physical(s.rho.grid(), m_p)};
}

Mm1Tendency rhs_conserved_nonlinear(const Mm1State& s, const FluidParams& params) {
    PrimitiveState prim = to_primitive_vars(s);
    Mm1Tendency full = rhs_mm1(prim, params);
    full.d_u -= lame_operator(s.u, params.mu, params.lambda);
    return full;
}

Mm1State& axpy_mm1(Mm1State& s, double alpha, const Mm1Tendency& k) {
    s.rho.axpy(alpha, k.d_rho);
    s.u.axpy(alpha, k.d_u);
    s.m.axpy(alpha, k.d_rho_theta);
    return s;
}

}  // namespace

PrimitiveState run_mm1(const PrimitiveState& initial, double dt, double T,
                       const FluidParams& params) {
    if (!(dt > 0.0) || !(T >= dt)) throw ConfigError("run_mm1: bad step or horizon");
    const auto& grid = initial.rho.grid();
    ViscousPhase full(*grid, params, dt), half(*grid, params, 0.5 * dt);

    Mm1State s = to_conserved(initial);
    dealias_inplace(s.rho);
    dealias_inplace(s.u);
    dealias_inplace(s.m);

    double t = 0.0;
    while (t < T - 1e-12 * T) {
        double h = std::min(dt, T - t);
        const ViscousPhase* f = &full;
        const ViscousPhase* hf = &half;
        std::optional<ViscousPhase> ftail, htail;
        if (h < dt * (1.0 - 1e-12)) {
            ftail.emplace(*grid, params, h);
            htail.emplace(*grid, params, 0.5 * h);
            f = &*ftail;
            hf = &*htail;
        }

        Mm1Tendency k1 = rhs_conserved_nonlinear(s, params);
        Mm1State za = s;
        axpy_mm1(za, 0.5 * h, k1);
        hf->apply(za.u, *grid);
        Mm1Tendency k2 = rhs_conserved_nonlinear(za, params);

        Mm1State zb = s;
        hf->apply(zb.u, *grid);
        axpy_mm1(zb, 0.5 * h, k2);
        Mm1Tendency k3 = rhs_conserved_nonlinear(zb, params);

        Mm1State zc = s;
        f->apply(zc.u, *grid);
        Mm1Tendency k3p = k3;
        hf->apply(k3p.d_u, *grid);
        axpy_mm1(zc, h, k3p);
        Mm1Tendency k4 = rhs_conserved_nonlinear(zc, params);

        Mm1State out = s;
        f->apply(out.u, *grid);
        Mm1Tendency k1p = k1;
        f->apply(k1p.d_u, *grid);
        Mm1Tendency k2p = k2;
        hf->apply(k2p.d_u, *grid);
        axpy_mm1(out, h / 6.0, k1p);
        axpy_mm1(out, h / 3.0, k2p);
        axpy_mm1(out, h / 3.0, k3p);
        axpy_mm1(out, h / 6.0, k4);
        s = std::move(out);
        t += h;
    }
    return to_primitive_vars(s);
}

}  // namespace thetaflow
