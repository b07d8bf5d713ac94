// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <vector>

namespace thetaflow {

class Fft;

using cplx = std::complex<double>;

/// Periodic grid on the torus (2*pi*L)^n with N collocation points per axis.
///
/// Wavenumbers are k = m/L with integer m stored in standard DFT order
/// (0, 1, ..., N/2-1, -N/2, ..., -1) per axis, flat index in C (row-major)
/// order so it matches the FFT layout bit-exactly.
class Grid {
  public:
    static std::shared_ptr<const Grid> make(int dim, int modes_per_axis, double period_scale);
    ~Grid();
    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int dim() const { return dim_; }
    int modes_per_axis() const { return n_; }
    std::size_t size() const { return size_; }
    double period_scale() const { return L_; }
    double box_length() const { return 2.0 * std::numbers::pi * L_; }
    double box_volume() const { return std::pow(box_length(), dim_); }

    /// Integer DFT frequency m of `flat` along `axis`.
    int mode(std::size_t flat, int axis) const {
        return freq_[(flat / stride_[axis]) % static_cast<std::size_t>(n_)];
    }
    /// Physical wavenumber k_axis = m/L.
    double wavenumber(std::size_t flat, int axis) const { return mode(flat, axis) / L_; }
    /// Wavenumber for sign-sensitive (odd) symbols: the Nyquist frequency
    /// -N/2 folds +N/2 and -N/2 onto one slot, so the only symmetric choice
    /// there is 0. Every operator that is linear in k uses this table, which
    /// keeps real fields real.
    double deriv_wavenumber(std::size_t flat, int axis) const {
        int m = mode(flat, axis);
        return m == -n_ / 2 ? 0.0 : m / L_;
    }
    double modulus(std::size_t flat) const { return moduli_[flat]; }
    const std::vector<double>& moduli() const { return moduli_; }

    /// Flat index of the mode with integer frequencies `m` (first dim() entries used).
    std::size_t index(const std::array<int, 3>& m) const;
    /// Flat index of -k.
    std::size_t conj_index(std::size_t flat) const;
    /// k == -k mod N (zero and Nyquist combinations).
    bool self_conjugate(std::size_t flat) const { return conj_index(flat) == flat; }
    /// Any axis frequency equal to -N/2.
    bool nyquist(std::size_t flat) const;

    /// Two-thirds rule: mode survives iff 3*|m_axis| <= N on every axis.
    /// Exact integer test; for N not divisible by 3 (powers of two) the kept
    /// band is alias-free under quadratic products.
    bool dealias_keep(std::size_t flat) const;
    /// Nominal dealiasing cutoff (2/3)(N/2)/L per axis.
    double dealias_cutoff() const { return (2.0 / 3.0) * (n_ / 2) / L_; }

    double min_nonzero_modulus() const { return 1.0 / L_; }
    double max_modulus() const;

    /// Grid coordinate of collocation point `flat` along `axis`, in [0, 2*pi*L).
    double coordinate(std::size_t flat, int axis) const {
        auto i = (flat / stride_[axis]) % static_cast<std::size_t>(n_);
        return box_length() * static_cast<double>(i) / n_;
    }

    const Fft& fft() const { return *fft_; }

  private:
    Grid(int dim, int modes_per_axis, double period_scale);

    int dim_;
    int n_;
    double L_;
    std::size_t size_;
    std::array<std::size_t, 3> stride_{};
    std::vector<int> freq_;        // DFT frequency per axis index
    std::vector<double> moduli_;   // |k| per flat index
    std::unique_ptr<Fft> fft_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace thetaflow
