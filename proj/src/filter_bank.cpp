// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/filter_bank.hpp"

#include <cmath>

#include "thetaflow/errors.hpp"
#include "thetaflow/ops.hpp"

namespace thetaflow {

namespace {

double bump_h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

// chi = 1 on [0, 3/4], 0 on [4/3, inf), C-infinity in between: the standard
// h/(h+h) partition bump with the transition zone mapped affinely to [1, 2].
double FilterBank::chi(double r) {
    if (r <= 0.75) return 1.0;
    if (r >= 4.0 / 3.0) return 0.0;
    double s = 1.0 + (r - 0.75) * (12.0 / 7.0);
    double up = bump_h(2.0 - s);
    double down = bump_h(s - 1.0);
    return up / (up + down);
}

FilterBank::FilterBank(GridPtr grid, int j0) : grid_(std::move(grid)), j0_(j0) {
    const auto& mod = grid_->moduli();
    double r_min = grid_->min_nonzero_modulus();
    double r_max = grid_->max_modulus();
    if (grid_->size() < 3) throw ConfigError("filter bank: grid has too few modes");

    // j_min: chi(2^-j r) vanishes for every nonzero grid modulus, i.e.
    // 2^-j r_min >= 4/3. j_max: chi(2^-(j+1) r) == 1 for every modulus, i.e.
    // 2^-(j_max+1) r_max <= 3/4. The sum over [j_min, j_max] then telescopes
    // to exactly 1 on every nonzero mode.
    j_min_ = static_cast<int>(std::floor(std::log2(0.75 * r_min)));
    j_max_ = static_cast<int>(std::ceil(std::log2(4.0 / 3.0 * r_max))) - 1;
    while (std::ldexp(1.0, -j_min_) * r_min < 4.0 / 3.0) --j_min_;
    while (std::ldexp(1.0, -(j_max_ + 1)) * r_max > 0.75) ++j_max_;

    if (j0_ < j_min_ || j0_ >= j_max_)
        throw ConfigError("filter bank: grid too coarse for the requested j0 = " +
                          std::to_string(j0_) + " (usable range [" + std::to_string(j_min_) +
                          ", " + std::to_string(j_max_ - 1) + "])");

    psi_.resize(static_cast<std::size_t>(j_max_ - j_min_ + 1));
    for (int j = j_min_; j <= j_max_; ++j) {
        auto& w = psi_[static_cast<std::size_t>(j - j_min_)];
        w.resize(grid_->size());
        double scale = std::ldexp(1.0, -j);
        for (std::size_t i = 0; i < mod.size(); ++i) w[i] = psi(scale * mod[i]);
    }
}

FilterBank build_filter_bank(GridPtr grid, int j0) { return FilterBank(std::move(grid), j0); }

void FilterBank::corrupt_block_for_tests(int j, double factor) {
    if (!in_range(j)) throw PreconditionError("corrupt_block_for_tests: j out of range");
    for (auto& w : psi_[static_cast<std::size_t>(j - j_min_)]) w *= factor;
}

const std::vector<double>& FilterBank::psi_weights(int j) const {
    if (!in_range(j)) throw PreconditionError("filter bank: block index out of range");
    return psi_[static_cast<std::size_t>(j - j_min_)];
}

std::vector<double> FilterBank::chi_weights(int j) const {
    const auto& mod = grid_->moduli();
    std::vector<double> w(mod.size());
    double scale = std::ldexp(1.0, -j);
    for (std::size_t i = 0; i < mod.size(); ++i) w[i] = chi(scale * mod[i]);
    return w;
}

double FilterBank::block_l2(const SpectralField& z, int j) const {
    if (!in_range(j)) return 0.0;
    const auto& w = psi_weights(j);
    double s = 0.0;
    for (int c = 0; c < z.components(); ++c) {
        auto sp = z.comp(c);
        for (std::size_t i = 0; i < sp.size(); ++i) s += w[i] * w[i] * std::norm(sp[i]);
    }
    return std::sqrt(grid_->box_volume() * s);
}

std::vector<double> FilterBank::block_l2_table(const SpectralField& z) const {
    std::vector<double> out(psi_.size());
    for (int j = j_min_; j <= j_max_; ++j)
        out[static_cast<std::size_t>(j - j_min_)] = block_l2(z, j);
    return out;
}

SpectralField dyadic_block(const FilterBank& bank, int j, const SpectralField& z,
                           bool* in_range) {
    if (in_range) *in_range = bank.in_range(j);
    if (!bank.in_range(j)) return SpectralField(z.grid(), z.components());
    const auto& w = bank.psi_weights(j);
    SpectralField out = z;
    for (int c = 0; c < z.components(); ++c) {
        auto sp = out.comp(c);
        for (std::size_t i = 0; i < sp.size(); ++i) sp[i] *= w[i];
    }
    return out;
}

SpectralField low_cutoff(const FilterBank& bank, int j, const SpectralField& z) {
    auto w = bank.chi_weights(j);
    SpectralField out = z;
    for (int c = 0; c < z.components(); ++c) {
        auto sp = out.comp(c);
        for (std::size_t i = 0; i < sp.size(); ++i) sp[i] *= w[i];
    }
    return out;
}

std::pair<SpectralField, SpectralField> split_low_high(const FilterBank& bank,
                                                       const SpectralField& z) {
    const auto& grid = *z.grid();
    std::vector<double> w_low(grid.size(), 0.0);
    for (int j = bank.j_min(); j <= bank.j0(); ++j) {
        const auto& w = bank.psi_weights(j);
        for (std::size_t i = 0; i < w.size(); ++i) w_low[i] += w[i];
    }
    SpectralField lo(z.grid(), z.components());
    SpectralField hi(z.grid(), z.components());
    for (int c = 0; c < z.components(); ++c) {
        auto in = z.comp(c);
        auto l = lo.comp(c);
        auto h = hi.comp(c);
        for (std::size_t i = 0; i < in.size(); ++i) {
            if (grid.modulus(i) == 0.0) continue;  // mean belongs to neither part
            l[i] = w_low[i] * in[i];
            h[i] = (1.0 - w_low[i]) * in[i];
        }
    }
    return {std::move(lo), std::move(hi)};
}

double bernstein_ratio(const FilterBank& bank, const SpectralField& z, int j, int order) {
    if (!bank.in_range(j)) throw PreconditionError("bernstein_ratio: block index out of range");
    double zn = z.l2_norm();
    if (zn == 0.0) throw PreconditionError("bernstein_ratio: zero field");
    // Spectrum must live in the j-th annulus 3/4 * 2^j <= |k| <= 8/3 * 2^j.
    const auto& grid = *z.grid();
    double lo = 0.75 * std::ldexp(1.0, j);
    double hi = 8.0 / 3.0 * std::ldexp(1.0, j);
    double leak = 0.0;
    for (int c = 0; c < z.components(); ++c) {
        auto sp = z.comp(c);
        for (std::size_t i = 0; i < sp.size(); ++i) {
            double r = grid.modulus(i);
            if (r < lo || r > hi) leak += std::norm(sp[i]);
        }
    }
    if (std::sqrt(grid.box_volume() * leak) > 1e-8 * zn)
        throw PreconditionError("bernstein_ratio: field is not localized to block j");
    SpectralField deriv = fractional_laplacian(z, static_cast<double>(order));
    return deriv.l2_norm() / (std::ldexp(1.0, j * order) * zn);
}

}  // namespace thetaflow
