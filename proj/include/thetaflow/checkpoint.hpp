// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>

#include "thetaflow/state.hpp"

namespace thetaflow {

/// Binary checkpoint, little-endian:
///   magic "THFL", u32 version = 1, u32 n, u32 N, f64 L, f64 t,
///   then the coefficient arrays of a, u (n components), b as interleaved
///   f64 (re, im) pairs in DFT order. Round trips are bit-exact.
void checkpoint_save(const PerturbationState& s, double t, const std::string& path);

std::pair<PerturbationState, double> checkpoint_load(const std::string& path);

}  // namespace thetaflow
