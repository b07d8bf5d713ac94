// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "thetaflow/grid.hpp"

namespace thetaflow {

/// FFTW-backed transforms between collocation values and Fourier coefficients.
///
/// Convention: z(x) = sum_k c(k) exp(i k.x), so a constant field c has c(0)=c.
/// Plans are created with FFTW_ESTIMATE for run-to-run determinism and
/// FFTW_UNALIGNED so they can execute on caller-owned buffers.
class Fft {
  public:
    explicit Fft(const Grid& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    /// Collocation samples (complex) -> coefficients, scaled by 1/N^n.
    void forward(std::span<const cplx> phys, std::span<cplx> coeff) const;
    /// Coefficients -> collocation samples (complex, unnormalized synthesis).
    void backward(std::span<const cplx> coeff, std::span<cplx> phys) const;

    /// Coefficients of a Hermitian field -> real collocation values.
    std::vector<double> to_physical(std::span<const cplx> coeff) const;
    /// Real collocation values -> coefficients (Hermitian by construction).
    void from_physical(std::span<const double> values, std::span<cplx> coeff) const;

    std::size_t size() const { return size_; }

  private:
    std::size_t size_;
    void* fwd_;  // fftw_plan
    void* bwd_;
};

}  // namespace thetaflow
