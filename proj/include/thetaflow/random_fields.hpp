// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

#include "thetaflow/filter_bank.hpp"

namespace thetaflow {

/// Zero-mean scalar field with Gaussian coefficients weighted by the band
/// indicator sum_{j in [j_lo, j_hi]} psi_j(|k|), Hermitian and dealiased.
/// Mode iteration order is fixed, so results are reproducible per seed.
SpectralField random_band_scalar(const FilterBank& bank, int j_lo, int j_hi,
                                 std::mt19937_64& rng);

/// Vector version (independent components).
SpectralField random_band_vector(const FilterBank& bank, int j_lo, int j_hi,
                                 std::mt19937_64& rng);

}  // namespace thetaflow
