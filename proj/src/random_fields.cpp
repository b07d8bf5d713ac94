// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/random_fields.hpp"

#include <algorithm>

#include "thetaflow/ops.hpp"

namespace thetaflow {

namespace {

std::vector<double> band_weights(const FilterBank& bank, int j_lo, int j_hi) {
    std::vector<double> w(bank.grid()->size(), 0.0);
    for (int j = std::max(j_lo, bank.j_min()); j <= std::min(j_hi, bank.j_max()); ++j) {
        const auto& p = bank.psi_weights(j);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += p[i];
    }
    return w;
}

void fill(SpectralField& f, const std::vector<double>& w, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const auto& grid = *f.grid();
    for (int c = 0; c < f.components(); ++c) {
        auto s = f.comp(c);
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (w[i] == 0.0 || !grid.dealias_keep(i)) continue;
            double re = gauss(rng), im = gauss(rng);
            s[i] = w[i] * cplx(re, im);
        }
    }
    f.enforce_hermitian();
    f.set_mean_zero();
    dealias_inplace(f);
}

}  // namespace

SpectralField random_band_scalar(const FilterBank& bank, int j_lo, int j_hi,
                                 std::mt19937_64& rng) {
    SpectralField f = SpectralField::scalar(bank.grid());
    fill(f, band_weights(bank, j_lo, j_hi), rng);
    return f;
}

SpectralField random_band_vector(const FilterBank& bank, int j_lo, int j_hi,
                                 std::mt19937_64& rng) {
    SpectralField f = SpectralField::vector(bank.grid());
    fill(f, band_weights(bank, j_lo, j_hi), rng);
    return f;
}

}  // namespace thetaflow
