// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "thetaflow/field.hpp"

namespace thetaflow {

/// Dyadic Littlewood-Paley filter bank sampled on a grid's wavenumbers.
///
/// chi is a smooth radial nonincreasing bump equal to 1 on B(0,3/4) and
/// supported in B(0,4/3); psi(xi) = chi(xi/2) - chi(xi) is supported in the
/// annulus 3/4 <= |xi| <= 8/3 and the dilates psi(2^-j .) telescope to 1 on
/// every nonzero grid modulus for j in [j_min, j_max].
class FilterBank {
  public:
    FilterBank(GridPtr grid, int j0);

    const GridPtr& grid() const { return grid_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    int j0() const { return j0_; }
    bool in_range(int j) const { return j >= j_min_ && j <= j_max_; }

    /// Smooth cutoff profile (radial argument).
    static double chi(double r);
    static double psi(double r) { return chi(0.5 * r) - chi(r); }

    /// Sampled psi(2^-j |k|) per mode.
    const std::vector<double>& psi_weights(int j) const;
    /// Sampled chi(2^-j |k|) per mode (computed on demand).
    std::vector<double> chi_weights(int j) const;

    /// Negative-control hook: scales one block's sampled weights so the
    /// partition of unity fails. Only checks and tests call this.
    void corrupt_block_for_tests(int j, double factor);

    /// Block L2 norm ||Delta_j z||_{L2} straight from coefficients.
    double block_l2(const SpectralField& z, int j) const;
    /// All blocks at once, indexed j - j_min.
    std::vector<double> block_l2_table(const SpectralField& z) const;

  private:
    GridPtr grid_;
    int j0_;
    int j_min_, j_max_;
    std::vector<std::vector<double>> psi_;  // [j - j_min][mode]
};

/// Builds the bank; throws ConfigError if the grid cannot host the requested
/// low/high split index j0.
FilterBank build_filter_bank(GridPtr grid, int j0);

/// Delta_j z. Outside [j_min, j_max] returns a zero field and sets *in_range
/// to false when provided.
SpectralField dyadic_block(const FilterBank& bank, int j, const SpectralField& z,
                           bool* in_range = nullptr);

/// S_j z = chi(2^-j D) z (the zero mode is kept: chi(0) = 1).
SpectralField low_cutoff(const FilterBank& bank, int j, const SpectralField& z);

/// z = z_low + z_high with z_low = sum_{j <= j0} Delta_j z. Exact off the mean.
std::pair<SpectralField, SpectralField> split_low_high(const FilterBank& bank,
                                                       const SpectralField& z);

/// ||Lambda^order z||_{L2} / (2^{j*order} ||z||_{L2}) for annulus-localized z.
/// Requires z = Delta_j z (up to 1e-8 relative) and z != 0.
double bernstein_ratio(const FilterBank& bank, const SpectralField& z, int j, int order);

}  // namespace thetaflow
