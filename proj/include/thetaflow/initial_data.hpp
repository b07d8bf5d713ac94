// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "thetaflow/config.hpp"
#include "thetaflow/filter_bank.hpp"
#include "thetaflow/state.hpp"

namespace thetaflow {

/// Initial data per the config's kind, scaled so that the theorem-style norm
/// ||(a^l, u, b^l)||_{B^{n/2-1}} + ||(a^h, b^h)||_{B^{n/2}} equals the
/// configured amplitude (exactly, by homogeneity). Deterministic per seed.
PerturbationState make_initial(const RunConfig& config, const FilterBank& bank);

}  // namespace thetaflow
