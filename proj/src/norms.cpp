// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/norms.hpp"

#include <algorithm>
#include <cmath>

#include "thetaflow/errors.hpp"

namespace thetaflow {

double besov_norm(const FilterBank& bank, const SpectralField& z, double s, Summability r) {
    double acc = 0.0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        double term = std::pow(2.0, s * j) * bank.block_l2(z, j);
        switch (r) {
            case Summability::L1: acc += term; break;
            case Summability::L2: acc += term * term; break;
            case Summability::Linf: acc = std::max(acc, term); break;
        }
    }
    return r == Summability::L2 ? std::sqrt(acc) : acc;
}

void BlockHistory::add(double t, std::vector<double> block_l2) {
    if (!times.empty() && t < times.back())
        throw PreconditionError("block history: samples must be time-ordered");
    times.push_back(t);
    blocks.push_back(std::move(block_l2));
}

double chemin_lerner_accumulate(const BlockHistory& history, const FilterBank& bank, TimeNorm q,
                                double s) {
    if (history.empty()) return 0.0;
    std::size_t nblocks = history.blocks.front().size();
    double total = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) {
        double acc = 0.0;
        if (q == TimeNorm::Linf) {
            for (const auto& row : history.blocks) acc = std::max(acc, row[b]);
        } else {
            for (std::size_t i = 1; i < history.times.size(); ++i) {
                double dt = history.times[i] - history.times[i - 1];
                acc += 0.5 * dt * (history.blocks[i][b] + history.blocks[i - 1][b]);
            }
        }
        int j = bank.j_min() + static_cast<int>(b);
        total += std::pow(2.0, s * j) * acc;
    }
    return total;
}

ChemindLernerAccumulator::ChemindLernerAccumulator(const FilterBank& bank)
    : j_min_(bank.j_min()) {
    std::size_t n = static_cast<std::size_t>(bank.j_max() - bank.j_min() + 1);
    running_max_.assign(n, 0.0);
    running_int_.assign(n, 0.0);
    last_.assign(n, 0.0);
}

void ChemindLernerAccumulator::add_sample(double t, const std::vector<double>& block_l2) {
    if (block_l2.size() != running_max_.size())
        throw PreconditionError("chemin-lerner accumulator: block table size mismatch");
    if (started_ && t < last_t_)
        throw PreconditionError("chemin-lerner accumulator: samples must be time-ordered");
    for (std::size_t b = 0; b < block_l2.size(); ++b) {
        running_max_[b] = std::max(running_max_[b], block_l2[b]);
        if (started_) running_int_[b] += 0.5 * (t - last_t_) * (block_l2[b] + last_[b]);
        last_[b] = block_l2[b];
    }
    last_t_ = t;
    started_ = true;
}

double ChemindLernerAccumulator::norm(TimeNorm q, double s) const {
    const auto& per_block = (q == TimeNorm::Linf) ? running_max_ : running_int_;
    double total = 0.0;
    for (std::size_t b = 0; b < per_block.size(); ++b)
        total += std::pow(2.0, s * (j_min_ + static_cast<int>(b))) * per_block[b];
    return total;
}

double ChemindLernerAccumulator::instantaneous(double s) const {
    double total = 0.0;
    for (std::size_t b = 0; b < last_.size(); ++b)
        total += std::pow(2.0, s * (j_min_ + static_cast<int>(b))) * last_[b];
    return total;
}

}  // namespace thetaflow
