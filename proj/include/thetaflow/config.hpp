// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "thetaflow/integrator.hpp"

namespace thetaflow {

/// Full experiment configuration. The on-disk form is flat key=value text,
/// one pair per line, '#' comments; unknown keys are rejected and every key
/// has a default (see dump_config for the canonical list).
struct RunConfig {
    int n = 2;
    int N = 128;
    double L = 4.0;
    FluidParams params;
    int j0 = 1;
    IntegratorConfig integrator;  // dt=1e-3, T=10 by default

    std::string kind = "random-band";  // random-band | taylor-green | single-mode | checkpoint
    double amplitude = 1e-2;           // c0 in the smallness condition
    int j_lo = -2;
    int j_hi = 2;
    unsigned long seed = 1;
    std::string checkpoint;  // input path for kind=checkpoint
    std::string outdir = "out";

    void validate() const;
};

RunConfig parse_config(const std::string& path);
/// Same parser on an in-memory buffer (name used in diagnostics); `base`
/// supplies the starting values, so sweep overrides can reuse the parser.
RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const RunConfig& base = {});

/// Canonical serialization; parse(dump(c)) == c bit-for-bit.
std::string dump_config(const RunConfig& c);

}  // namespace thetaflow
