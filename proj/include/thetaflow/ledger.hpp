// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetaflow/dynamics.hpp"
#include "thetaflow/norms.hpp"
#include "thetaflow/propagator.hpp"

namespace thetaflow {

// ---- energy functional -----------------------------------------------------

/// One row of the energy ledger. inst_* are instantaneous Besov sums,
/// cl_inf_* the Chemin-Lerner running maxima, l1_* the running time
/// integrals; E is the sum of the four accumulated pieces.
struct EnergyRecord {
    double t = 0.0;
    double inst_low = 0.0;     // ||(a^l, b^l, u)||_{B^{n/2-1}}
    double inst_high = 0.0;    // ||(a^h, b^h)||_{B^{n/2}}
    double cl_inf_low = 0.0;   // same fields, per-block running max
    double cl_inf_high = 0.0;
    double l1_low_bu = 0.0;    // int ||(b^l, u)||_{B^{n/2+1}}
    double l1_high_b = 0.0;    // int ||b^h||_{B^{n/2}}
    double E = 0.0;
};

/// Streaming energy ledger fed at the integrator's accepted samples.
class EnergyLedger {
  public:
    explicit EnergyLedger(const FilterBank& bank);

    EnergyRecord add_sample(const PerturbationState& s, double t);
    const std::vector<EnergyRecord>& records() const { return records_; }
    /// E0 = inst_low(0) + inst_high(0).
    double initial_energy() const;
    double max_energy() const;

  private:
    const FilterBank* bank_;
    double s_low_, s_high_, s_parab_;
    ChemindLernerAccumulator a_low_, b_low_, u_, a_high_, b_high_;
    std::vector<EnergyRecord> records_;
};

/// Theorem-style initial norm ||(a^l, u, b^l)||_{B^{n/2-1}} + ||(a^h, b^h)||_{B^{n/2}}.
double theorem_norm(const FilterBank& bank, const PerturbationState& s);

/// Smallest C >= 0 with E(t) <= E0 + C E^2 (1 + C E) at every sample;
/// infinity when the series is not finite.
double continuity_inequality_check(const std::vector<EnergyRecord>& records);

// ---- per-block Lyapunov functional ------------------------------------------

/// Pieces of L_k^2 = ||b_k||^2 + gamma ||v_k||^2 + (1/gamma) ||Lambda b_k||^2
///                   - <v_k, Lambda b_k>
/// for already block-filtered inputs.
struct LyapunovBlock {
    double b_l2 = 0.0, v_l2 = 0.0, lam_b_l2 = 0.0, cross = 0.0;
    double value_sq = 0.0;
    /// L_k^2 / ||(b_k, v_k)||^2; 0 when the denominator vanishes.
    double coercivity_ratio() const {
        double d = b_l2 * b_l2 + v_l2 * v_l2;
        return d > 0.0 ? value_sq / d : 0.0;
    }
};

LyapunovBlock lyapunov_block(const SpectralField& b_k, const SpectralField& v_k,
                             const FluidParams& params);

/// Convenience: applies the paper's low-frequency convention
/// b_k^l = Delta_k S_{j0} b before forming the functional. Requires k <= j0.
LyapunovBlock lyapunov_block_of(const FilterBank& bank, int k, const SpectralField& b,
                                const SpectralField& v, const FluidParams& params);

// ---- block time series -------------------------------------------------------

/// Reduced per-block trajectory data: everything the decay checks need,
/// collected streamingly so full states never have to be stored.
class BlockLedger {
  public:
    BlockLedger(const FilterBank& bank, const FluidParams& params, bool with_sources,
                double floor = kDensityFloor);

    void add_sample(const PerturbationState& s, double t);

    const std::vector<double>& times() const { return times_; }
    int k_min() const;
    int j0() const;
    int j_max() const;
    /// Low-block series, index [k - k_min]; each entry has one row per sample.
    const std::vector<std::vector<LyapunovBlock>>& low_blocks() const { return low_; }
    const std::vector<std::vector<double>>& f_low_norms() const { return f_norm_; }
    /// ||Delta_j b|| series for every block j (full range), index [j - j_min].
    const std::vector<std::vector<double>>& b_blocks() const { return b_blocks_; }
    /// ||b^h||_{B^{n/2}} series.
    const std::vector<double>& b_high_norm() const { return b_high_norm_; }

    const FilterBank& bank() const { return *bank_; }
    const FluidParams& params() const { return params_; }

  private:
    const FilterBank* bank_;
    FluidParams params_;
    bool with_sources_;
    double floor_;
    std::vector<double> times_;
    std::vector<std::vector<LyapunovBlock>> low_;
    std::vector<std::vector<double>> f_norm_;  // [k - k_min][sample]: ||(f1_k, f2_k)||
    std::vector<std::vector<double>> b_blocks_;
    std::vector<double> b_high_norm_;
};

// ---- fitted-rate machinery ---------------------------------------------------

/// Least-squares slope of log(values) over the sample window
/// [lo_frac, hi_frac] of the time range (default: middle 60%). Returns the
/// decay rate (positive = decaying); nullopt when fewer than two usable
/// samples remain above the floor.
std::optional<double> fit_decay_rate(const std::vector<double>& times,
                                     const std::vector<double>& values, double lo_frac = 0.2,
                                     double hi_frac = 0.8, double floor = 1e-300);

/// Hypocoercive decay of the low blocks: with C = 100 fixed, the largest c
/// such that (1/2) d/dt L_k^2 + c 2^{2k} L_k^2 <= C ||(f1_k, f2_k)|| L_k at
/// all interior samples.
struct BlockDecayRow {
    int k = 0;
    double c_fit = 0.0;
    bool ok = false;  // c_fit >= 0.1
};
std::vector<BlockDecayRow> block_decay_check(const BlockLedger& data, double c_required = 0.1,
                                             double C_source = 100.0);

/// Fitted exponential rates of ||Delta_j b|| per block against the slow
/// eigenvalue of the linear system.
struct DampingRow {
    int j = 0;
    double fitted_rate = 0.0;
    double predicted_rate = 0.0;  // -Re lambda_+ at the annulus center sqrt(2) 2^j
    double rel_error = 0.0;       // against gamma/nu_q for asserted rows
    bool asserted = false;        // 2^j >= 4 sqrt(gamma) and block is populated
    bool ok = false;
};
std::vector<DampingRow> high_freq_damping_check(const BlockLedger& data,
                                                double tolerance = 0.2);

/// Per-mode kernel component phi_hat/gamma = a_hat - b_hat/gamma tracked
/// against its initial value. Modes with initial |phi| below
/// rel_floor * max are ignored.
class KernelTracker {
  public:
    KernelTracker(const PerturbationState& initial, const FluidParams& params,
                  double rel_floor = 1e-3);
    void add_sample(const PerturbationState& s);
    double max_relative_drift() const { return worst_; }

  private:
    double gamma_;
    double rel_floor_;
    std::vector<cplx> phi0_;
    double phi0_max_ = 0.0;
    double worst_ = 0.0;
};

struct NonDissipativityReport {
    double kernel_drift = 0.0;   // max relative change of the kernel component
    double b_high_start = 0.0;   // ||b^h||_{B^{n/2}} at the first sample
    double b_high_end = 0.0;
    bool kernel_ok = false;      // drift < 1%
    bool damping_ok = false;     // b_high dropped by >= 50%
};
NonDissipativityReport non_dissipativity_check(const KernelTracker& tracker,
                                               const BlockLedger& data);

// ---- estimate terms ------------------------------------------------------------

struct NamedValue {
    std::string name;
    double value;
};

/// Every norm appearing on the right of the master inequality, the assembled
/// integrand products, the directly computed nonlinear-term norms, and the
/// product-law ratios (0 when both sides vanish).
std::vector<NamedValue> estimate_terms(const PerturbationState& s, const FilterBank& bank,
                                       const FluidParams& params, double floor = kDensityFloor);

// ---- heat estimate for Pu -------------------------------------------------------

/// Streaming check of the parabolic estimate for the incompressible part:
///   ||Pu||_{CLinf(B^{n/2-1})} + ||Pu||_{L1(B^{n/2+1})}
///     <= ratio * ( ||Pu_0||_{B^{n/2-1}} + ||u.grad u||_{L1(B^{n/2-1})}
///                  + ||I(a) grad b||_{L1} + ||I(a) Lame u||_{L1} ).
class HeatCheckLedger {
  public:
    HeatCheckLedger(const FilterBank& bank, const FluidParams& params,
                    double floor = kDensityFloor);
    void add_sample(const PerturbationState& s, double t);

    /// LHS / RHS with unit constants; nullopt when the trajectory is zero.
    std::optional<double> ratio() const;
    double lhs() const;
    double rhs() const;

  private:
    const FilterBank* bank_;
    FluidParams params_;
    double floor_;
    double s_low_, s_parab_;
    ChemindLernerAccumulator pu_;
    double pu0_norm_ = 0.0;
    double forcing_l1_ = 0.0;
    double last_forcing_ = 0.0;
    double last_t_ = 0.0;
    bool started_ = false;
};

/// Closed-form lin_eigenvalues against a dense eigensolve of the full 3x3
/// generator M(r): max eigenvalue deviation (after nearest matching) and
/// kernel-direction deviation.
struct DenseEigenCheck {
    double eigenvalue_dev = 0.0;
    double kernel_dev = 0.0;
};
DenseEigenCheck dense_vs_closed_eigen(double r, const FluidParams& params);

/// The damped b equation in effective-velocity variables,
///   d/dt b + (gamma/nu_q) b + u.grad b + gamma div G + gamma b div u = 0,
/// as a two-snapshot residual like the others in dynamics.hpp.
ResidualReport residual_damped_b_equation(const PerturbationState& s1,
                                          const PerturbationState& s2, double dt,
                                          const FluidParams& params,
                                          double floor = kDensityFloor);

}  // namespace thetaflow
