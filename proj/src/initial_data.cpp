// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/initial_data.hpp"

#include <cmath>
#include <random>

#include "thetaflow/checkpoint.hpp"
#include "thetaflow/errors.hpp"
#include "thetaflow/fft.hpp"
#include "thetaflow/ledger.hpp"
#include "thetaflow/ops.hpp"
#include "thetaflow/random_fields.hpp"

namespace thetaflow {

namespace {

void normalize_to(PerturbationState& s, const FilterBank& bank, double c0) {
    double norm = theorem_norm(bank, s);
    if (c0 == 0.0) {
        s = PerturbationState::zero(s.grid());
        return;
    }
    if (norm == 0.0)
        throw ConfigError("make_initial: zero seed state cannot be scaled to amplitude > 0");
    double scale = c0 / norm;
    s.a *= scale;
    s.u *= scale;
    s.b *= scale;
}

PerturbationState make_random_band(const RunConfig& cfg, const FilterBank& bank) {
    if (cfg.j_hi < bank.j_min() || cfg.j_lo > bank.j_max())
        throw ConfigError("make_initial: band outside the grid's block range");
    std::mt19937_64 rng(cfg.seed);
    PerturbationState s{random_band_scalar(bank, cfg.j_lo, cfg.j_hi, rng),
                        random_band_vector(bank, cfg.j_lo, cfg.j_hi, rng),
                        random_band_scalar(bank, cfg.j_lo, cfg.j_hi, rng)};
    return s;
}

PerturbationState make_taylor_green(const RunConfig& cfg, const FilterBank& bank) {
    const auto& grid = bank.grid();
    PerturbationState s = PerturbationState::zero(grid);
    double kappa = 1.0 / cfg.L;
    std::vector<double> ux(grid->size()), uy(grid->size()), uz;
    if (grid->dim() == 3) uz.assign(grid->size(), 0.0);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double x = grid->coordinate(i, 0), y = grid->coordinate(i, 1);
        double z3 = grid->dim() == 3 ? std::sin(kappa * grid->coordinate(i, 2)) : 1.0;
        ux[i] = std::cos(kappa * x) * std::sin(kappa * y) * z3;
        uy[i] = -std::sin(kappa * x) * std::cos(kappa * y) * z3;
    }
    grid->fft().from_physical(ux, s.u.comp(0));
    grid->fft().from_physical(uy, s.u.comp(1));
    if (grid->dim() == 3) grid->fft().from_physical(uz, s.u.comp(2));
    dealias_inplace(s.u);
    return s;
}

PerturbationState make_single_mode(const RunConfig& cfg, const FilterBank& bank) {
    const auto& grid = bank.grid();
    // A wavevector in the pure band [4/3, 3/2] * 2^{j_lo} sits in exactly one
    // annulus (psi = 1 there, neighbors vanish).
    double lo = 4.0 / 3.0 * std::ldexp(1.0, cfg.j_lo);
    double hi = 1.5 * std::ldexp(1.0, cfg.j_lo);
    std::size_t pick = 0;
    bool found = false;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double r = grid->modulus(i);
        if (r >= lo && r <= hi && grid->dealias_keep(i)) {
            pick = i;
            found = true;
            break;
        }
    }
    if (!found)
        throw ConfigError("make_initial: no single-annulus mode exists for j_lo = " +
                          std::to_string(cfg.j_lo));
    PerturbationState s = PerturbationState::zero(grid);
    double r = grid->modulus(pick);
    s.a.at(0, pick) = cplx(0.5, 0.0);
    s.b.at(0, pick) = cplx(0.5, 0.0);
    // Velocity along k so the compressible block is exercised.
    for (int d = 0; d < grid->dim(); ++d)
        s.u.at(d, pick) = cplx(0.0, -0.5) * (grid->wavenumber(pick, d) / r);
    s.a.enforce_hermitian();
    s.b.enforce_hermitian();
    s.u.enforce_hermitian();
    return s;
}

}  // namespace

PerturbationState make_initial(const RunConfig& cfg, const FilterBank& bank) {
    const auto& grid = bank.grid();
    if (cfg.kind == "checkpoint") {
        auto [state, t] = checkpoint_load(cfg.checkpoint);
        (void)t;
        if (state.grid()->dim() != grid->dim() ||
            state.grid()->modes_per_axis() != grid->modes_per_axis() ||
            state.grid()->period_scale() != grid->period_scale())
            throw ConfigError("make_initial: checkpoint grid does not match config");
        // Re-home the coefficients on the caller's grid object so downstream
        // ops see one shared Grid instance.
        PerturbationState out = PerturbationState::zero(grid);
        auto copy_into = [](const SpectralField& src, SpectralField& dst) {
            for (int c = 0; c < src.components(); ++c) {
                auto in = src.comp(c);
                auto to = dst.comp(c);
                for (std::size_t i = 0; i < in.size(); ++i) to[i] = in[i];
            }
        };
        copy_into(state.a, out.a);
        copy_into(state.u, out.u);
        copy_into(state.b, out.b);
        return out;
    }
    PerturbationState s = PerturbationState::zero(grid);
    if (cfg.kind == "random-band") s = make_random_band(cfg, bank);
    else if (cfg.kind == "taylor-green") s = make_taylor_green(cfg, bank);
    else if (cfg.kind == "single-mode") s = make_single_mode(cfg, bank);
    else throw ConfigError("make_initial: unknown kind '" + cfg.kind + "'");
    normalize_to(s, bank, cfg.amplitude);
    return s;
}

}  // namespace thetaflow
