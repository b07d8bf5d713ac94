// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/grid.hpp"

#include <cmath>

#include "thetaflow/errors.hpp"
#include "thetaflow/fft.hpp"

namespace thetaflow {

Grid::Grid(int dim, int modes_per_axis, double period_scale)
    : dim_(dim), n_(modes_per_axis), L_(period_scale) {
    if (dim_ != 2 && dim_ != 3)
        throw ConfigError("grid: dimension must be 2 or 3, got " + std::to_string(dim_));
    if (n_ < 4 || n_ % 2 != 0)
        throw ConfigError("grid: modes per axis must be even and >= 4, got " + std::to_string(n_));
    if (!(L_ > 0.0)) throw ConfigError("grid: period scale must be positive");

    size_ = 1;
    for (int d = 0; d < dim_; ++d) size_ *= static_cast<std::size_t>(n_);
    // C-order strides: last axis fastest, matching the FFT layout.
    stride_[dim_ - 1] = 1;
    for (int d = dim_ - 2; d >= 0; --d) stride_[d] = stride_[d + 1] * static_cast<std::size_t>(n_);

    freq_.resize(n_);
    for (int i = 0; i < n_; ++i) freq_[i] = (i < n_ / 2) ? i : i - n_;

    moduli_.resize(size_);
    for (std::size_t idx = 0; idx < size_; ++idx) {
        double k2 = 0.0;
        for (int d = 0; d < dim_; ++d) {
            double k = wavenumber(idx, d);
            k2 += k * k;
        }
        moduli_[idx] = std::sqrt(k2);
    }
}

Grid::~Grid() = default;

std::shared_ptr<const Grid> Grid::make(int dim, int modes_per_axis, double period_scale) {
    auto g = std::shared_ptr<Grid>(new Grid(dim, modes_per_axis, period_scale));
    g->fft_ = std::make_unique<Fft>(*g);
    return g;
}

std::size_t Grid::index(const std::array<int, 3>& m) const {
    std::size_t idx = 0;
    for (int d = 0; d < dim_; ++d) {
        int w = ((m[d] % n_) + n_) % n_;
        idx += static_cast<std::size_t>(w) * stride_[d];
    }
    return idx;
}

std::size_t Grid::conj_index(std::size_t flat) const {
    std::size_t idx = 0;
    for (int d = 0; d < dim_; ++d) {
        auto i = (flat / stride_[d]) % static_cast<std::size_t>(n_);
        auto j = (static_cast<std::size_t>(n_) - i) % static_cast<std::size_t>(n_);
        idx += j * stride_[d];
    }
    return idx;
}

bool Grid::nyquist(std::size_t flat) const {
    for (int d = 0; d < dim_; ++d)
        if (mode(flat, d) == -n_ / 2) return true;
    return false;
}

bool Grid::dealias_keep(std::size_t flat) const {
    for (int d = 0; d < dim_; ++d)
        if (3 * std::abs(mode(flat, d)) > n_) return false;
    return true;
}

double Grid::max_modulus() const {
    return std::sqrt(static_cast<double>(dim_)) * (n_ / 2) / L_;
}

}  // namespace thetaflow
