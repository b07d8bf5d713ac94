// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/field.hpp"

#include <cmath>

#include "thetaflow/errors.hpp"

namespace thetaflow {

SpectralField::SpectralField(GridPtr grid, int components)
    : grid_(std::move(grid)), ncomp_(components) {
    if (ncomp_ < 1) throw ConfigError("field: component count must be positive");
    data_.assign(static_cast<std::size_t>(ncomp_) * grid_->size(), cplx(0.0, 0.0));
}

SpectralField SpectralField::vector(GridPtr grid) {
    int n = grid->dim();
    return SpectralField(std::move(grid), n);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double alpha) {
    for (auto& c : data_) c *= alpha;
    return *this;
}

SpectralField& SpectralField::axpy(double alpha, const SpectralField& other) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
    return *this;
}

double SpectralField::l2_norm() const {
    double s = 0.0;
    for (const auto& c : data_) s += std::norm(c);
    return std::sqrt(grid_->box_volume() * s);
}

void SpectralField::set_mean_zero() {
    for (int c = 0; c < ncomp_; ++c) data_[offset(c)] = cplx(0.0, 0.0);
}

double SpectralField::hermitian_defect() const {
    double worst = 0.0, amp = 0.0;
    for (int c = 0; c < ncomp_; ++c) {
        auto s = comp(c);
        for (std::size_t i = 0; i < s.size(); ++i) {
            amp = std::max(amp, std::abs(s[i]));
            auto j = grid_->conj_index(i);
            worst = std::max(worst, std::abs(s[j] - std::conj(s[i])));
        }
    }
    return amp > 0.0 ? worst / amp : 0.0;
}

void SpectralField::enforce_hermitian() {
    for (int c = 0; c < ncomp_; ++c) {
        auto s = comp(c);
        for (std::size_t i = 0; i < s.size(); ++i) {
            auto j = grid_->conj_index(i);
            if (j == i) {
                s[i] = cplx(s[i].real(), 0.0);
            } else if (j > i) {
                cplx avg = 0.5 * (s[i] + std::conj(s[j]));
                s[i] = avg;
                s[j] = std::conj(avg);
            }
        }
    }
}

bool SpectralField::has_nan() const {
    for (const auto& c : data_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    return false;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
    if (f.components() != g.components() || f.grid() != g.grid())
        throw PreconditionError("inner_product: mismatched fields");
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        auto a = f.comp(c);
        auto b = g.comp(c);
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] * std::conj(b[i])).real();
    }
    return f.grid()->box_volume() * s;
}

double integral(const SpectralField& f, int c) {
    return f.grid()->box_volume() * f.mean(c).real();
}

}  // namespace thetaflow
