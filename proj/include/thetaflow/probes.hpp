// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "thetaflow/filter_bank.hpp"

namespace thetaflow {

/// Empirical constants for the inequalities the analysis leans on, measured
/// as the supremum over randomized band-limited trials of LHS/RHS with unit
/// constants. The probes assert nothing themselves; callers check finiteness
/// and resolution stability.
struct LemmaProbeReport {
    int trials = 0;
    int skipped = 0;             // 0/0 trials
    double product_ratio = 0.0;  // ||uv||_{B^{n/2}} / (||u|| ||v||), s1 = s2 = n/2
    double commutator_ratio = 0.0;
    double composition_ratio = 0.0;  // G = I, s = n/2
    double heat_inf_ratio = 0.0;     // q1 = inf
    double heat_l1_ratio = 0.0;      // q1 = 1
};

LemmaProbeReport run_lemma_probes(const FilterBank& bank, int trials, unsigned long seed = 7);

}  // namespace thetaflow
