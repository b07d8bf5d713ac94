// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "thetaflow/errors.hpp"
#include "thetaflow/grid.hpp"

namespace thetaflow {

namespace {
// The FFTW planner is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(const Grid& grid) : size_(grid.size()) {
    int rank = grid.dim();
    int n[3] = {grid.modes_per_axis(), grid.modes_per_axis(), grid.modes_per_axis()};
    // Dummy buffer for planning; execution uses the new-array interface.
    fftw_complex* buf = fftw_alloc_complex(size_);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft(rank, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft(rank, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    fftw_free(buf);
    if (!fwd_ || !bwd_) throw ConfigError("fft: plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(std::span<const cplx> phys, std::span<cplx> coeff) const {
    if (phys.size() != size_ || coeff.size() != size_)
        throw ConfigError("fft: buffer shape does not match grid");
    // FFTW's c2c transform is out-of-place safe when in != out.
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(phys.data()));
    auto* out = reinterpret_cast<fftw_complex*>(coeff.data());
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), in, out);
    double scale = 1.0 / static_cast<double>(size_);
    for (auto& c : coeff) c *= scale;
}

void Fft::backward(std::span<const cplx> coeff, std::span<cplx> phys) const {
    if (phys.size() != size_ || coeff.size() != size_)
        throw ConfigError("fft: buffer shape does not match grid");
    auto* in = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(coeff.data()));
    auto* out = reinterpret_cast<fftw_complex*>(phys.data());
    fftw_execute_dft(static_cast<fftw_plan>(bwd_), in, out);
}

std::vector<double> Fft::to_physical(std::span<const cplx> coeff) const {
    std::vector<cplx> work(size_);
    backward(coeff, work);
    std::vector<double> out(size_);
    for (std::size_t i = 0; i < size_; ++i) out[i] = work[i].real();
    return out;
}

void Fft::from_physical(std::span<const double> values, std::span<cplx> coeff) const {
    if (values.size() != size_) throw ConfigError("fft: sample array shape does not match grid");
    std::vector<cplx> work(size_);
    for (std::size_t i = 0; i < size_; ++i) work[i] = cplx(values[i], 0.0);
    forward(work, coeff);
}

}  // namespace thetaflow
