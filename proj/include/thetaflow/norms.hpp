// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "thetaflow/filter_bank.hpp"

namespace thetaflow {

enum class Summability { L1, L2, Linf };

/// Homogeneous Besov norm ||z||_{B^s_{2,r}} = || (2^{js} ||Delta_j z||_L2)_j ||_{l^r}.
/// The zero mode never enters (psi(0) = 0), so the mean is ignored.
double besov_norm(const FilterBank& bank, const SpectralField& z, double s,
                  Summability r = Summability::L1);

/// Time-Lebesgue norm per dyadic block, for Chemin-Lerner norms.
enum class TimeNorm { L1, Linf };

/// Per-field history of block L2 norms at the integrator's accepted samples.
struct BlockHistory {
    std::vector<double> times;
    std::vector<std::vector<double>> blocks;  // [sample][j - j_min]

    void add(double t, std::vector<double> block_l2);
    bool empty() const { return times.empty(); }
};

/// Chemin-Lerner norm over the recorded window: per block, the running max
/// (q = Linf) or the trapezoidal time integral (q = L1), then the 2^{js}
/// weighted l1 sum over blocks. Empty history gives 0.
double chemin_lerner_accumulate(const BlockHistory& history, const FilterBank& bank,
                                TimeNorm q, double s);

/// Streaming equivalent of chemin_lerner_accumulate: feed block tables in time
/// order, read off both time norms at any point. Monotone in the horizon.
class ChemindLernerAccumulator {
  public:
    explicit ChemindLernerAccumulator(const FilterBank& bank);

    void add_sample(double t, const std::vector<double>& block_l2);
    double norm(TimeNorm q, double s) const;
    /// Latest instantaneous Besov l1 norm from the last sample.
    double instantaneous(double s) const;
    bool empty() const { return !started_; }

  private:
    int j_min_;
    bool started_ = false;
    double last_t_ = 0.0;
    std::vector<double> running_max_, running_int_, last_;
};

}  // namespace thetaflow
