// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "thetaflow/grid.hpp"

namespace thetaflow {

/// n-dimensional periodic field stored as Fourier coefficients, one block of
/// Grid::size() coefficients per component (1 for scalars, dim for vectors).
///
/// Fields representing real data keep Hermitian symmetry c(-k) = conj(c(k));
/// all operators in ops.hpp preserve it.
class SpectralField {
  public:
    SpectralField(GridPtr grid, int components);
    static SpectralField scalar(GridPtr grid) { return SpectralField(std::move(grid), 1); }
    static SpectralField vector(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    int components() const { return ncomp_; }
    std::size_t modes() const { return grid_->size(); }

    cplx& at(int comp, std::size_t idx) { return data_[offset(comp) + idx]; }
    const cplx& at(int comp, std::size_t idx) const { return data_[offset(comp) + idx]; }
    std::span<cplx> comp(int c) { return {data_.data() + offset(c), modes()}; }
    std::span<const cplx> comp(int c) const { return {data_.data() + offset(c), modes()}; }

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double alpha);
    /// this += alpha * other
    SpectralField& axpy(double alpha, const SpectralField& other);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double alpha, SpectralField f) { return f *= alpha; }

    /// L2(torus) norm over all components (Parseval, with the box volume).
    double l2_norm() const;
    /// Zero-mode coefficient of component c (the field mean).
    cplx mean(int c = 0) const { return data_[offset(c)]; }
    void set_mean_zero();

    /// max |c(-k) - conj(c(k))| over modes and components, relative to max |c|.
    double hermitian_defect() const;
    void enforce_hermitian();

    bool has_nan() const;

  private:
    std::size_t offset(int c) const { return static_cast<std::size_t>(c) * modes(); }

    GridPtr grid_;
    int ncomp_;
    std::vector<cplx> data_;
};

/// L2(torus) inner product <f, g> (real part; exact for Hermitian fields).
double inner_product(const SpectralField& f, const SpectralField& g);

/// Integral of component c over the box: vol * c(0).
double integral(const SpectralField& f, int c = 0);

}  // namespace thetaflow
