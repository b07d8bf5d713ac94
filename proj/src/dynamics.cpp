// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/dynamics.hpp"

#include <cmath>
#include <vector>

#include "thetaflow/errors.hpp"
#include "thetaflow/ops.hpp"

namespace thetaflow {

namespace {

using Phys = std::vector<double>;

Phys phys_of(const SpectralField& f, int c = 0) { return physical(f, c); }

SpectralField spectral_of(const GridPtr& g, const Phys& v) {
    SpectralField out = from_physical(g, v);
    dealias_inplace(out);
    return out;
}

// u.grad s evaluated pointwise from prefetched collocation values.
Phys advect(const std::vector<Phys>& u_p, const std::vector<Phys>& grad_p) {
    Phys out(u_p[0].size(), 0.0);
    for (std::size_t d = 0; d < u_p.size(); ++d)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += u_p[d][i] * grad_p[d][i];
    return out;
}

std::vector<Phys> phys_vector(const SpectralField& u) {
    std::vector<Phys> out;
    out.reserve(u.components());
    for (int c = 0; c < u.components(); ++c) out.push_back(physical(u, c));
    return out;
}

std::vector<Phys> phys_gradient(const SpectralField& s) {
    std::vector<Phys> out;
    const int n = s.grid()->dim();
    out.reserve(n);
    for (int d = 0; d < n; ++d) out.push_back(physical(derivative(s, d)));
    return out;
}

}  // namespace

Mm3Tendency rhs_mm3_nonlinear(const PerturbationState& s, const FluidParams& params,
                              double floor) {
    const auto& grid = s.grid();
    const int n = grid->dim();

    auto a_p = phys_of(s.a);
    for (double v : a_p)
        if (!(1.0 + v > floor)) throw StateError("rhs_mm3: density below floor");
    auto b_p = phys_of(s.b);
    auto u_p = phys_vector(s.u);
    auto grad_a = phys_gradient(s.a);
    auto grad_b = phys_gradient(s.b);
    auto divu_p = phys_of(divergence(s.u));

    // da = -(u.grad a + a div u)
    Phys da = advect(u_p, grad_a);
    for (std::size_t i = 0; i < da.size(); ++i) da[i] = -(da[i] + a_p[i] * divu_p[i]);

    // db = -(u.grad b + gamma b div u)
    Phys db = advect(u_p, grad_b);
    for (std::size_t i = 0; i < db.size(); ++i)
        db[i] = -(db[i] + params.gamma * b_p[i] * divu_p[i]);

    // du_c = -u.grad u_c + I(a) (grad b - Lame u)_c
    SpectralField lame = lame_operator(s.u, params.mu, params.lambda);
    Phys Ia(a_p.size());
    for (std::size_t i = 0; i < Ia.size(); ++i) Ia[i] = a_p[i] / (1.0 + a_p[i]);

    Mm3Tendency out{spectral_of(grid, da), SpectralField::vector(grid), spectral_of(grid, db)};
    // d a = -div((1+a)u) has exactly zero mean; pin away the roundoff. The b
    // tendency keeps its mean: (gamma-1) b div u integrates to something
    // nonzero, and projecting it out would break the pressure-law coupling
    // to the primitive form at second order in the amplitude.
    out.da.set_mean_zero();
    for (int c = 0; c < n; ++c) {
        std::vector<Phys> grad_uc;
        grad_uc.reserve(n);
        for (int d = 0; d < n; ++d) {
            SpectralField comp_c = SpectralField::scalar(grid);
            auto src = s.u.comp(c);
            auto dst = comp_c.comp(0);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
            grad_uc.push_back(physical(derivative(comp_c, d)));
        }
        Phys adv = advect(u_p, grad_uc);
        auto lame_p = physical(lame, c);
        for (std::size_t i = 0; i < adv.size(); ++i)
            adv[i] = -adv[i] + Ia[i] * (grad_b[c][i] - lame_p[i]);
        SpectralField comp = spectral_of(grid, adv);
        auto src = comp.comp(0);
        auto dst = out.du.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    return out;
}

Mm3Tendency rhs_mm3(const PerturbationState& s, const FluidParams& params, double floor) {
    Mm3Tendency out = rhs_mm3_nonlinear(s, params, floor);
    SpectralField divu = divergence(s.u);
    out.da.axpy(-1.0, divu);
    out.db.axpy(-params.gamma, divu);
    out.du += lame_operator(s.u, params.mu, params.lambda);
    out.du -= gradient(s.b);
    return out;
}

Mm1Tendency rhs_mm1(const PrimitiveState& s, const FluidParams& params) {
    const auto& grid = s.rho.grid();
    const int n = grid->dim();

    auto rho_p = phys_of(s.rho);
    auto theta_p = phys_of(s.theta);
    for (std::size_t i = 0; i < rho_p.size(); ++i)
        if (!(rho_p[i] > 0.0) || !(theta_p[i] > 0.0))
            throw StateError("rhs_mm1: positivity lost");
    auto u_p = phys_vector(s.u);

    // Mass and rho*theta in divergence form: both conserved exactly in space.
    auto flux_div = [&](const Phys& density) {
        SpectralField flux = SpectralField::vector(grid);
        for (int d = 0; d < n; ++d) {
            Phys fd(density.size());
            for (std::size_t i = 0; i < fd.size(); ++i) fd[i] = density[i] * u_p[d][i];
            SpectralField comp = spectral_of(grid, fd);
            auto src = comp.comp(0);
            auto dst = flux.comp(d);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
        }
        SpectralField div = divergence(flux);
        div *= -1.0;
        return div;
    };
    Phys m_p(rho_p.size());
    for (std::size_t i = 0; i < m_p.size(); ++i) m_p[i] = rho_p[i] * theta_p[i];

    // Pressure P = A (rho theta)^gamma, pointwise; gradient taken spectrally.
    Phys P_p(m_p.size());
    for (std::size_t i = 0; i < P_p.size(); ++i) P_p[i] = params.A * std::pow(m_p[i], params.gamma);
    SpectralField P = spectral_of(grid, P_p);

    SpectralField lame = lame_operator(s.u, params.mu, params.lambda);
    SpectralField gradP = gradient(P);

    Mm1Tendency out{flux_div(rho_p), SpectralField::vector(grid), flux_div(m_p)};
    for (int c = 0; c < n; ++c) {
        std::vector<Phys> grad_uc;
        grad_uc.reserve(n);
        for (int d = 0; d < n; ++d) {
            SpectralField comp_c = SpectralField::scalar(grid);
            auto src = s.u.comp(c);
            auto dst = comp_c.comp(0);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
            grad_uc.push_back(physical(derivative(comp_c, d)));
        }
        Phys adv = advect(u_p, grad_uc);
        auto lame_p = physical(lame, c);
        auto gP_p = physical(gradP, c);
        for (std::size_t i = 0; i < adv.size(); ++i)
            adv[i] = -adv[i] + (lame_p[i] - gP_p[i]) / rho_p[i];
        SpectralField comp = spectral_of(grid, adv);
        auto src = comp.comp(0);
        auto dst = out.d_u.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    return out;
}

SpectralField nonlinear_force(const SpectralField& a, const SpectralField& u,
                              const SpectralField& b, const FluidParams& params, double floor) {
    const auto& grid = a.grid();
    SpectralField Ia = rational_density_fn(a, floor);
    auto Ia_p = phys_of(Ia);
    SpectralField lame = lame_operator(u, params.mu, params.lambda);
    SpectralField gradb = gradient(b);
    SpectralField out = SpectralField::vector(grid);
    for (int c = 0; c < grid->dim(); ++c) {
        auto g_p = physical(gradb, c);
        auto l_p = physical(lame, c);
        for (std::size_t i = 0; i < g_p.size(); ++i) g_p[i] = Ia_p[i] * (g_p[i] - l_p[i]);
        SpectralField comp = spectral_of(grid, g_p);
        auto src = comp.comp(0);
        auto dst = out.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    return out;
}

SpectralField good_unknown_phi(const SpectralField& a, const SpectralField& b,
                               const FluidParams& params) {
    SpectralField phi = a;
    phi *= params.gamma;
    phi -= b;
    return phi;
}

SpectralField compressible_scalar(const SpectralField& u) {
    return fractional_laplacian(divergence(u), -1.0);
}

SpectralField effective_velocity(const SpectralField& u, const SpectralField& b,
                                 const FluidParams& params) {
    SpectralField g = gradient_project(u);
    g.axpy(-1.0 / params.nu_q(), inverse_laplacian(gradient(b)));
    return g;
}

std::pair<SpectralField, SpectralField> low_freq_sources(const PerturbationState& s,
                                                         const FluidParams& params,
                                                         double floor) {
    // f1 is exactly the nonlinear part of the b equation; reuse that path so
    // the algebraic identity -gamma Lambda v + f1 = db holds to roundoff.
    Mm3Tendency nl = rhs_mm3_nonlinear(s, params, floor);
    SpectralField f1 = std::move(nl.db);

    const auto& grid = s.grid();
    auto u_p = phys_vector(s.u);
    SpectralField adv_u = SpectralField::vector(grid);
    for (int c = 0; c < grid->dim(); ++c) {
        std::vector<Phys> grad_uc;
        for (int d = 0; d < grid->dim(); ++d) {
            SpectralField comp_c = SpectralField::scalar(grid);
            auto src = s.u.comp(c);
            auto dst = comp_c.comp(0);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
            grad_uc.push_back(physical(derivative(comp_c, d)));
        }
        Phys adv = advect(u_p, grad_uc);
        SpectralField comp = spectral_of(grid, adv);
        auto src = comp.comp(0);
        auto dst = adv_u.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    SpectralField inner = nonlinear_force(s.a, s.u, s.b, params, floor);
    inner -= adv_u;
    SpectralField f2 = fractional_laplacian(divergence(inner), -1.0);
    return {std::move(f1), std::move(f2)};
}

ResidualReport residual_phi_equation(const PerturbationState& s1, const PerturbationState& s2,
                                     double dt, const FluidParams& params, double floor) {
    if (!(dt > 0.0)) throw PreconditionError("residual_phi_equation: dt must be positive");
    const auto& grid = s1.grid();
    PerturbationState mid = PerturbationState::zero(grid);
    mid.a = s1.a;
    mid.a += s2.a;
    mid.a *= 0.5;
    mid.u = s1.u;
    mid.u += s2.u;
    mid.u *= 0.5;
    mid.b = s1.b;
    mid.b += s2.b;
    mid.b *= 0.5;
    (void)floor;

    SpectralField phi1 = good_unknown_phi(s1.a, s1.b, params);
    SpectralField phi2 = good_unknown_phi(s2.a, s2.b, params);
    SpectralField dphi = phi2;
    dphi -= phi1;
    dphi *= 1.0 / dt;

    SpectralField phim = good_unknown_phi(mid.a, mid.b, params);
    auto u_p = phys_vector(mid.u);
    auto grad_phi = phys_gradient(phim);
    Phys adv = advect(u_p, grad_phi);
    auto a_p = phys_of(mid.a);
    auto b_p = phys_of(mid.b);
    auto divu_p = phys_of(divergence(mid.u));
    for (std::size_t i = 0; i < adv.size(); ++i)
        adv[i] += params.gamma * (a_p[i] - b_p[i]) * divu_p[i];
    SpectralField rhs = spectral_of(grid, adv);

    SpectralField res = dphi;
    res += rhs;
    return {res.l2_norm(), phim.l2_norm(), true};
}

ResidualReport residual_G_equation(const PerturbationState& s1, const PerturbationState& s2,
                                   double dt, const FluidParams& params, double floor) {
    if (!(dt > 0.0)) throw PreconditionError("residual_G_equation: dt must be positive");
    if (std::abs(params.nu_q() - 2.0) > 1e-12) return {0.0, 0.0, false};
    const auto& grid = s1.grid();
    const double g = params.gamma;

    PerturbationState mid = PerturbationState::zero(grid);
    mid.a = s1.a;
    mid.a += s2.a;
    mid.a *= 0.5;
    mid.u = s1.u;
    mid.u += s2.u;
    mid.u *= 0.5;
    mid.b = s1.b;
    mid.b += s2.b;
    mid.b *= 0.5;

    SpectralField G1 = effective_velocity(s1.u, s1.b, params);
    SpectralField G2 = effective_velocity(s2.u, s2.b, params);
    SpectralField dG = G2;
    dG -= G1;
    dG *= 1.0 / dt;

    SpectralField Gm = effective_velocity(mid.u, mid.b, params);

    // RHS terms at the midpoint state.
    // 2 Delta G = -2 Lambda^2 G
    SpectralField rhs = fractional_laplacian(Gm, 2.0);
    rhs *= -2.0;
    rhs.axpy(0.5 * g, Gm);
    SpectralField invlap_grad_b = inverse_laplacian(gradient(mid.b));
    rhs.axpy(0.25 * g, invlap_grad_b);

    auto b_p = phys_of(mid.b);
    auto u_p = phys_vector(mid.u);
    SpectralField bu = SpectralField::vector(grid);
    for (int c = 0; c < grid->dim(); ++c) {
        Phys prod(b_p.size());
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = b_p[i] * u_p[c][i];
        SpectralField comp = spectral_of(grid, prod);
        auto src = comp.comp(0);
        auto dst = bu.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    rhs.axpy(0.5, gradient_project(bu));

    auto divu_p = phys_of(divergence(mid.u));
    Phys bdiv(b_p.size());
    for (std::size_t i = 0; i < bdiv.size(); ++i) bdiv[i] = b_p[i] * divu_p[i];
    SpectralField bdivu = spectral_of(grid, bdiv);
    rhs.axpy(0.5 * (g - 1.0), inverse_laplacian(gradient(bdivu)));

    SpectralField advu = SpectralField::vector(grid);
    for (int c = 0; c < grid->dim(); ++c) {
        std::vector<Phys> grad_uc;
        for (int d = 0; d < grid->dim(); ++d) {
            SpectralField comp_c = SpectralField::scalar(grid);
            auto src = mid.u.comp(c);
            auto dst = comp_c.comp(0);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
            grad_uc.push_back(physical(derivative(comp_c, d)));
        }
        Phys adv = advect(u_p, grad_uc);
        SpectralField comp = spectral_of(grid, adv);
        auto src = comp.comp(0);
        auto dst = advu.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    rhs.axpy(-1.0, gradient_project(advu));
    rhs.axpy(1.0, gradient_project(nonlinear_force(mid.a, mid.u, mid.b, params, floor)));

    SpectralField res = dG;
    res -= rhs;
    double scale = mid.b.l2_norm() + gradient_project(mid.u).l2_norm() + Gm.l2_norm();
    return {res.l2_norm(), scale, true};
}

}  // namespace thetaflow
