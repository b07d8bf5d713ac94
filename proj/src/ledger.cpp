// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/ledger.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

#include "thetaflow/errors.hpp"
#include "thetaflow/ops.hpp"

namespace thetaflow {

// ---- energy functional -----------------------------------------------------

EnergyLedger::EnergyLedger(const FilterBank& bank)
    : bank_(&bank),
      s_low_(0.5 * bank.grid()->dim() - 1.0),
      s_high_(0.5 * bank.grid()->dim()),
      s_parab_(0.5 * bank.grid()->dim() + 1.0),
      a_low_(bank),
      b_low_(bank),
      u_(bank),
      a_high_(bank),
      b_high_(bank) {}

EnergyRecord EnergyLedger::add_sample(const PerturbationState& s, double t) {
    auto [al, ah] = split_low_high(*bank_, s.a);
    auto [bl, bh] = split_low_high(*bank_, s.b);
    a_low_.add_sample(t, bank_->block_l2_table(al));
    b_low_.add_sample(t, bank_->block_l2_table(bl));
    u_.add_sample(t, bank_->block_l2_table(s.u));
    a_high_.add_sample(t, bank_->block_l2_table(ah));
    b_high_.add_sample(t, bank_->block_l2_table(bh));

    EnergyRecord rec;
    rec.t = t;
    rec.inst_low = a_low_.instantaneous(s_low_) + b_low_.instantaneous(s_low_) +
                   u_.instantaneous(s_low_);
    rec.inst_high = a_high_.instantaneous(s_high_) + b_high_.instantaneous(s_high_);
    rec.cl_inf_low = a_low_.norm(TimeNorm::Linf, s_low_) + b_low_.norm(TimeNorm::Linf, s_low_) +
                     u_.norm(TimeNorm::Linf, s_low_);
    rec.cl_inf_high =
        a_high_.norm(TimeNorm::Linf, s_high_) + b_high_.norm(TimeNorm::Linf, s_high_);
    rec.l1_low_bu = b_low_.norm(TimeNorm::L1, s_parab_) + u_.norm(TimeNorm::L1, s_parab_);
    rec.l1_high_b = b_high_.norm(TimeNorm::L1, s_high_);
    rec.E = rec.cl_inf_low + rec.cl_inf_high + rec.l1_low_bu + rec.l1_high_b;
    records_.push_back(rec);
    return rec;
}

double EnergyLedger::initial_energy() const {
    if (records_.empty()) return 0.0;
    return records_.front().inst_low + records_.front().inst_high;
}

double EnergyLedger::max_energy() const {
    double m = 0.0;
    for (const auto& r : records_) m = std::max(m, r.E);
    return m;
}

double theorem_norm(const FilterBank& bank, const PerturbationState& s) {
    double n = bank.grid()->dim();
    auto [al, ah] = split_low_high(bank, s.a);
    auto [bl, bh] = split_low_high(bank, s.b);
    return besov_norm(bank, al, 0.5 * n - 1.0) + besov_norm(bank, bl, 0.5 * n - 1.0) +
           besov_norm(bank, s.u, 0.5 * n - 1.0) + besov_norm(bank, ah, 0.5 * n) +
           besov_norm(bank, bh, 0.5 * n);
}

double continuity_inequality_check(const std::vector<EnergyRecord>& records) {
    if (records.empty()) return 0.0;
    double e0 = records.front().inst_low + records.front().inst_high;
    for (const auto& r : records)
        if (!std::isfinite(r.E)) return std::numeric_limits<double>::infinity();

    auto holds = [&](double c) {
        for (const auto& r : records)
            if (r.E > e0 + c * r.E * r.E * (1.0 + c * r.E) + 1e-15) return false;
        return true;
    };
    if (holds(0.0)) return 0.0;
    double hi = 1.0;
    while (!holds(hi)) {
        hi *= 2.0;
        if (hi > 1e12) return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (holds(mid) ? hi : lo) = mid;
    }
    return hi;
}

// ---- Lyapunov blocks ---------------------------------------------------------

LyapunovBlock lyapunov_block(const SpectralField& b_k, const SpectralField& v_k,
                             const FluidParams& params) {
    LyapunovBlock out;
    SpectralField lam_b = fractional_laplacian(b_k, 1.0);
    out.b_l2 = b_k.l2_norm();
    out.v_l2 = v_k.l2_norm();
    out.lam_b_l2 = lam_b.l2_norm();
    out.cross = inner_product(v_k, lam_b);
    out.value_sq = out.b_l2 * out.b_l2 + params.gamma * out.v_l2 * out.v_l2 +
                   out.lam_b_l2 * out.lam_b_l2 / params.gamma - out.cross;
    return out;
}

LyapunovBlock lyapunov_block_of(const FilterBank& bank, int k, const SpectralField& b,
                                const SpectralField& v, const FluidParams& params) {
    if (k > bank.j0()) throw PreconditionError("lyapunov_block: k must be a low block");
    SpectralField bl = low_cutoff(bank, bank.j0(), b);
    SpectralField vl = low_cutoff(bank, bank.j0(), v);
    return lyapunov_block(dyadic_block(bank, k, bl), dyadic_block(bank, k, vl), params);
}

// ---- block ledger -------------------------------------------------------------

BlockLedger::BlockLedger(const FilterBank& bank, const FluidParams& params, bool with_sources,
                         double floor)
    : bank_(&bank), params_(params), with_sources_(with_sources), floor_(floor) {
    std::size_t nlow = static_cast<std::size_t>(bank.j0() - bank.j_min() + 1);
    std::size_t nall = static_cast<std::size_t>(bank.j_max() - bank.j_min() + 1);
    low_.resize(nlow);
    f_norm_.resize(nlow);
    b_blocks_.resize(nall);
}

int BlockLedger::k_min() const { return bank_->j_min(); }
int BlockLedger::j0() const { return bank_->j0(); }
int BlockLedger::j_max() const { return bank_->j_max(); }

void BlockLedger::add_sample(const PerturbationState& s, double t) {
    times_.push_back(t);
    SpectralField v = compressible_scalar(s.u);
    SpectralField bl = low_cutoff(*bank_, bank_->j0(), s.b);
    SpectralField vl = low_cutoff(*bank_, bank_->j0(), v);

    for (int k = bank_->j_min(); k <= bank_->j0(); ++k) {
        auto blk = lyapunov_block(dyadic_block(*bank_, k, bl), dyadic_block(*bank_, k, vl),
                                  params_);
        low_[static_cast<std::size_t>(k - bank_->j_min())].push_back(blk);
    }
    bool sources_ok = false;
    if (with_sources_) {
        try {
            auto [f1, f2] = low_freq_sources(s, params_, floor_);
            SpectralField f1l = low_cutoff(*bank_, bank_->j0(), f1);
            SpectralField f2l = low_cutoff(*bank_, bank_->j0(), f2);
            for (int k = bank_->j_min(); k <= bank_->j0(); ++k) {
                double n1 = bank_->block_l2(f1l, k);
                double n2 = bank_->block_l2(f2l, k);
                f_norm_[static_cast<std::size_t>(k - bank_->j_min())].push_back(n1 + n2);
            }
            sources_ok = true;
        } catch (const StateError&) {
            // trajectory heading into blowup: record the sample without sources
        }
    }
    if (!sources_ok)
        for (auto& col : f_norm_) col.push_back(0.0);

    auto table = bank_->block_l2_table(s.b);
    for (std::size_t j = 0; j < table.size(); ++j) b_blocks_[j].push_back(table[j]);

    auto [blo, bhi] = split_low_high(*bank_, s.b);
    b_high_norm_.push_back(besov_norm(*bank_, bhi, 0.5 * bank_->grid()->dim()));
}

// ---- fitted rates ---------------------------------------------------------------

std::optional<double> fit_decay_rate(const std::vector<double>& times,
                                     const std::vector<double>& values, double lo_frac,
                                     double hi_frac, double floor) {
    if (times.size() != values.size() || times.size() < 3) return std::nullopt;
    double t0 = times.front(), t1 = times.back();
    double lo = t0 + lo_frac * (t1 - t0);
    double hi = t0 + hi_frac * (t1 - t0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < lo || times[i] > hi) continue;
        if (!(values[i] > floor)) continue;
        double x = times[i], y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return std::nullopt;
    double denom = n * sxx - sx * sx;
    if (denom <= 0.0) return std::nullopt;
    double slope = (n * sxy - sx * sy) / denom;
    return -slope;
}

std::vector<BlockDecayRow> block_decay_check(const BlockLedger& data, double c_required,
                                             double C_source) {
    const auto& t = data.times();
    std::vector<BlockDecayRow> rows;
    if (t.size() < 3) throw PreconditionError("block_decay_check: need at least 3 samples");
    for (int k = data.k_min(); k <= data.j0(); ++k) {
        const auto& series = data.low_blocks()[static_cast<std::size_t>(k - data.k_min())];
        const auto& fser = data.f_low_norms()[static_cast<std::size_t>(k - data.k_min())];
        double lmax = 0.0;
        for (const auto& blk : series) lmax = std::max(lmax, blk.value_sq);
        BlockDecayRow row{k, std::numeric_limits<double>::infinity(), false};
        bool any = false;
        double four_k = std::pow(2.0, 2 * k);
        for (std::size_t i = 1; i + 1 < series.size(); ++i) {
            double l2 = series[i].value_sq;
            if (!(l2 > 1e-24 * lmax) || l2 <= 0.0) continue;
            double dldt =
                (series[i + 1].value_sq - series[i - 1].value_sq) / (t[i + 1] - t[i - 1]);
            double c_allowed =
                (C_source * fser[i] * std::sqrt(l2) - 0.5 * dldt) / (four_k * l2);
            row.c_fit = std::min(row.c_fit, c_allowed);
            any = true;
        }
        // A block with no content satisfies the inequality trivially.
        row.ok = any ? row.c_fit >= c_required : true;
        rows.push_back(row);
    }
    return rows;
}

std::vector<DampingRow> high_freq_damping_check(const BlockLedger& data, double tolerance) {
    const auto& bank = data.bank();
    const auto& params = data.params();
    double plateau = params.gamma / params.nu_q();
    std::vector<DampingRow> rows;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        const auto& series = data.b_blocks()[static_cast<std::size_t>(j - bank.j_min())];
        DampingRow row;
        row.j = j;
        double r_center = std::sqrt(2.0) * std::ldexp(1.0, j);
        row.predicted_rate = -lin_eigenvalues(r_center, params).lambda_plus.real();
        double peak = series.empty() ? 0.0 : *std::max_element(series.begin(), series.end());
        auto rate = fit_decay_rate(data.times(), series, 0.2, 0.8, 1e-14 * std::max(peak, 1.0));
        bool populated = peak > 0.0 && rate.has_value();
        row.fitted_rate = rate.value_or(0.0);
        bool high = std::ldexp(1.0, j) >= 4.0 * std::sqrt(params.gamma);
        row.asserted = high && populated;
        row.rel_error = populated ? std::abs(row.fitted_rate - plateau) / plateau : 0.0;
        row.ok = !row.asserted || row.rel_error <= tolerance;
        rows.push_back(row);
    }
    return rows;
}

// ---- kernel tracker --------------------------------------------------------------

KernelTracker::KernelTracker(const PerturbationState& initial, const FluidParams& params,
                             double rel_floor)
    : gamma_(params.gamma), rel_floor_(rel_floor) {
    std::size_t n = initial.grid()->size();
    phi0_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        phi0_[i] = gamma_ * initial.a.at(0, i) - initial.b.at(0, i);
        phi0_max_ = std::max(phi0_max_, std::abs(phi0_[i]));
    }
}

void KernelTracker::add_sample(const PerturbationState& s) {
    if (phi0_max_ == 0.0) return;
    for (std::size_t i = 0; i < phi0_.size(); ++i) {
        double mag = std::abs(phi0_[i]);
        if (mag < rel_floor_ * phi0_max_) continue;
        cplx phi = gamma_ * s.a.at(0, i) - s.b.at(0, i);
        worst_ = std::max(worst_, std::abs(phi - phi0_[i]) / mag);
    }
}

NonDissipativityReport non_dissipativity_check(const KernelTracker& tracker,
                                               const BlockLedger& data) {
    NonDissipativityReport rep;
    rep.kernel_drift = tracker.max_relative_drift();
    rep.kernel_ok = rep.kernel_drift < 0.01;
    const auto& bh = data.b_high_norm();
    if (!bh.empty()) {
        rep.b_high_start = bh.front();
        rep.b_high_end = bh.back();
        rep.damping_ok = rep.b_high_start > 0.0 && rep.b_high_end <= 0.5 * rep.b_high_start;
    }
    return rep;
}

// ---- estimate terms ----------------------------------------------------------------

namespace {

double ratio_or_zero(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace

std::vector<NamedValue> estimate_terms(const PerturbationState& s, const FilterBank& bank,
                                       const FluidParams& params, double floor) {
    const auto& grid = s.grid();
    double n = grid->dim();
    double sm = 0.5 * n - 1.0, s0 = 0.5 * n, sp = 0.5 * n + 1.0;

    auto [al, ah] = split_low_high(bank, s.a);
    auto [bl, bh] = split_low_high(bank, s.b);

    double a_low = besov_norm(bank, al, sm);
    double b_low = besov_norm(bank, bl, sm);
    double a_high = besov_norm(bank, ah, s0);
    double b_high = besov_norm(bank, bh, s0);
    double u_low = besov_norm(bank, s.u, sm);
    double u_mid = besov_norm(bank, s.u, s0);
    double u_parab = besov_norm(bank, s.u, sp);
    double b_low_parab = besov_norm(bank, bl, sp);
    double b_mid = besov_norm(bank, s.b, s0);

    // Direct nonlinear-term norms.
    auto u_p = [&](int c) { return physical(s.u, c); };
    std::vector<std::vector<double>> up;
    for (int c = 0; c < grid->dim(); ++c) up.push_back(u_p(c));
    SpectralField advu = SpectralField::vector(grid);
    for (int c = 0; c < grid->dim(); ++c) {
        std::vector<double> acc(grid->size(), 0.0);
        for (int d = 0; d < grid->dim(); ++d) {
            SpectralField comp_c = SpectralField::scalar(grid);
            auto src = s.u.comp(c);
            auto dst = comp_c.comp(0);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
            auto gp = physical(derivative(comp_c, d));
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += up[d][i] * gp[i];
        }
        SpectralField comp = dealias(from_physical(grid, acc));
        auto src = comp.comp(0);
        auto dst = advu.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    SpectralField F = nonlinear_force(s.a, s.u, s.b, params, floor);
    SpectralField divu = divergence(s.u);
    SpectralField b_divu = multiply(s.b, divu);
    b_divu.set_mean_zero();
    std::vector<double> ugb_acc(grid->size(), 0.0);
    for (int d = 0; d < grid->dim(); ++d) {
        auto gp = physical(derivative(s.b, d));
        for (std::size_t i = 0; i < ugb_acc.size(); ++i) ugb_acc[i] += up[d][i] * gp[i];
    }
    SpectralField u_grad_b = dealias(from_physical(grid, ugb_acc));
    u_grad_b.set_mean_zero();
    SpectralField bu = SpectralField::vector(grid);
    {
        auto bp = physical(s.b);
        for (int c = 0; c < grid->dim(); ++c) {
            std::vector<double> prod(grid->size());
            for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = bp[i] * up[c][i];
            SpectralField comp = dealias(from_physical(grid, prod));
            auto src = comp.comp(0);
            auto dst = bu.comp(c);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
        }
    }
    SpectralField Ia = rational_density_fn(s.a, floor);
    SpectralField Ia_grad_b = SpectralField::vector(grid);
    SpectralField Ia_lame = SpectralField::vector(grid);
    {
        auto iap = physical(Ia);
        SpectralField lame = lame_operator(s.u, params.mu, params.lambda);
        SpectralField gradb = gradient(s.b);
        for (int c = 0; c < grid->dim(); ++c) {
            auto gp = physical(gradb, c);
            auto lp = physical(lame, c);
            std::vector<double> p1(gp.size()), p2(gp.size());
            for (std::size_t i = 0; i < gp.size(); ++i) {
                p1[i] = iap[i] * gp[i];
                p2[i] = iap[i] * lp[i];
            }
            SpectralField c1 = dealias(from_physical(grid, p1));
            SpectralField c2 = dealias(from_physical(grid, p2));
            for (std::size_t i = 0; i < grid->size(); ++i) {
                Ia_grad_b.at(c, i) = c1.at(0, i);
                Ia_lame.at(c, i) = c2.at(0, i);
            }
        }
    }

    double lhs_advu = besov_norm(bank, advu, sm);
    double lhs_F = besov_norm(bank, F, sm);
    double lhs_b_divu = besov_norm(bank, b_divu, sm);
    double lhs_u_grad_b = besov_norm(bank, u_grad_b, sm);
    auto [bu_lo, bu_hi] = split_low_high(bank, bu);
    double lhs_bu_high = besov_norm(bank, bu_hi, sm);
    double lhs_Ia_grad_b = besov_norm(bank, Ia_grad_b, sm);
    auto [ial_lo, ial_hi] = split_low_high(bank, Ia_lame);
    double lhs_Ia_lame_high = besov_norm(bank, ial_hi, sm);

    // Assembled right-hand sides of the master inequality's integrands.
    double low_ab = a_low + b_low;
    double t1 = (low_ab + a_high) * (b_high + u_parab);
    double t2 = (b_low + u_low + b_high) * (b_low_parab + u_parab + b_high);
    double t3 = (low_ab + a_high + 1.0) * (low_ab + a_high) * b_low_parab;

    std::vector<NamedValue> out;
    auto push = [&out](std::string name, double v) { out.push_back({std::move(name), v}); };
    push("a_low@s-1", a_low);
    push("b_low@s-1", b_low);
    push("u@s-1", u_low);
    push("a_high@s0", a_high);
    push("b_high@s0", b_high);
    push("u@s0", u_mid);
    push("b@s0", b_mid);
    push("u@s+1", u_parab);
    push("b_low@s+1", b_low_parab);
    push("integrand_1", t1);
    push("integrand_2", t2);
    push("integrand_3", t3);
    push("lhs_u_grad_u@s-1", lhs_advu);
    push("lhs_F@s-1", lhs_F);
    push("lhs_b_divu@s-1", lhs_b_divu);
    push("lhs_u_grad_b@s-1", lhs_u_grad_b);
    push("lhs_bu_high@s-1", lhs_bu_high);
    push("lhs_Ia_grad_b@s-1", lhs_Ia_grad_b);
    push("lhs_Ia_lame_high@s-1", lhs_Ia_lame_high);
    push("ratio_advection", ratio_or_zero(lhs_advu, u_low * u_parab));
    push("ratio_b_divu",
         ratio_or_zero(lhs_b_divu + lhs_u_grad_b + lhs_bu_high,
                       b_low * b_low_parab + b_high * b_high + u_low * u_parab));
    push("ratio_Ia_grad_b",
         ratio_or_zero(lhs_Ia_grad_b,
                       (low_ab + a_high) * b_high +
                           (low_ab + a_high + 1.0) * (low_ab + a_high) * b_low_parab));
    push("ratio_Ia_lame_high", ratio_or_zero(lhs_Ia_lame_high, (low_ab + a_high) * u_parab));
    return out;
}

// ---- heat check ------------------------------------------------------------------

HeatCheckLedger::HeatCheckLedger(const FilterBank& bank, const FluidParams& params,
                                 double floor)
    : bank_(&bank),
      params_(params),
      floor_(floor),
      s_low_(0.5 * bank.grid()->dim() - 1.0),
      s_parab_(0.5 * bank.grid()->dim() + 1.0),
      pu_(bank) {}

void HeatCheckLedger::add_sample(const PerturbationState& s, double t) {
    const auto& grid = s.grid();
    SpectralField pu = leray_project(s.u);
    if (!started_) pu0_norm_ = besov_norm(*bank_, pu, s_low_);
    pu_.add_sample(t, bank_->block_l2_table(pu));

    // Forcing norms ||u.grad u|| + ||I(a) grad b|| + ||I(a) Lame u|| at s-1.
    std::vector<std::vector<double>> up;
    for (int c = 0; c < grid->dim(); ++c) up.push_back(physical(s.u, c));
    SpectralField advu = SpectralField::vector(grid);
    for (int c = 0; c < grid->dim(); ++c) {
        std::vector<double> acc(grid->size(), 0.0);
        for (int d = 0; d < grid->dim(); ++d) {
            SpectralField comp_c = SpectralField::scalar(grid);
            auto src = s.u.comp(c);
            auto dst = comp_c.comp(0);
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
            auto gp = physical(derivative(comp_c, d));
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += up[d][i] * gp[i];
        }
        SpectralField comp = dealias(from_physical(grid, acc));
        auto src = comp.comp(0);
        auto dst = advu.comp(c);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    }
    SpectralField Ia = SpectralField::scalar(grid);
    try {
        Ia = rational_density_fn(s.a, floor_);
    } catch (const StateError&) {
        // near-vacuum sample on a blowup path: treat the force as absent
    }
    SpectralField lame = lame_operator(s.u, params_.mu, params_.lambda);
    SpectralField gradb = gradient(s.b);
    SpectralField ia_gb = SpectralField::vector(grid);
    SpectralField ia_lame = SpectralField::vector(grid);
    auto iap = physical(Ia);
    for (int c = 0; c < grid->dim(); ++c) {
        auto gp = physical(gradb, c);
        auto lp = physical(lame, c);
        std::vector<double> p1(gp.size()), p2(gp.size());
        for (std::size_t i = 0; i < gp.size(); ++i) {
            p1[i] = iap[i] * gp[i];
            p2[i] = iap[i] * lp[i];
        }
        SpectralField c1 = dealias(from_physical(grid, p1));
        SpectralField c2 = dealias(from_physical(grid, p2));
        for (std::size_t i = 0; i < grid->size(); ++i) {
            ia_gb.at(c, i) = c1.at(0, i);
            ia_lame.at(c, i) = c2.at(0, i);
        }
    }
    double forcing = besov_norm(*bank_, advu, s_low_) + besov_norm(*bank_, ia_gb, s_low_) +
                     besov_norm(*bank_, ia_lame, s_low_);
    if (started_) forcing_l1_ += 0.5 * (t - last_t_) * (forcing + last_forcing_);
    last_forcing_ = forcing;
    last_t_ = t;
    started_ = true;
}

double HeatCheckLedger::lhs() const {
    return pu_.norm(TimeNorm::Linf, s_low_) + pu_.norm(TimeNorm::L1, s_parab_);
}

double HeatCheckLedger::rhs() const { return pu0_norm_ + forcing_l1_; }

std::optional<double> HeatCheckLedger::ratio() const {
    double denom = rhs();
    if (denom <= 0.0) return std::nullopt;
    return lhs() / denom;
}

DenseEigenCheck dense_vs_closed_eigen(double r, const FluidParams& params) {
    auto gen = LinearPropagator::generator(r, params);
    Eigen::Matrix3d M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) M(i, j) = gen[static_cast<std::size_t>(3 * i + j)];
    Eigen::EigenSolver<Eigen::Matrix3d> solver(M);
    auto vals = solver.eigenvalues();
    auto vecs = solver.eigenvectors();

    // Identify the (near) zero eigenvalue; the other two pair with lambda+-.
    int kzero = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(vals[i]) < std::abs(vals[kzero])) kzero = i;
    std::vector<std::complex<double>> rest;
    for (int i = 0; i < 3; ++i)
        if (i != kzero) rest.push_back(vals[i]);

    LinearEigen closed = lin_eigenvalues(r, params);
    double d1 = std::max(std::abs(rest[0] - closed.lambda_plus),
                         std::abs(rest[1] - closed.lambda_minus));
    double d2 = std::max(std::abs(rest[0] - closed.lambda_minus),
                         std::abs(rest[1] - closed.lambda_plus));
    DenseEigenCheck out;
    out.eigenvalue_dev = std::max(std::abs(vals[kzero]), std::min(d1, d2));

    Eigen::Vector3cd kv = vecs.col(kzero);
    kv /= kv(0);  // kernel is the pure-a axis, so component 0 cannot vanish
    out.kernel_dev = std::max(std::abs(kv(1)), std::abs(kv(2)));
    return out;
}

ResidualReport residual_damped_b_equation(const PerturbationState& s1,
                                          const PerturbationState& s2, double dt,
                                          const FluidParams& params, double floor) {
    if (!(dt > 0.0)) throw PreconditionError("residual_damped_b_equation: dt must be positive");
    const auto& grid = s1.grid();
    (void)floor;
    PerturbationState mid = PerturbationState::zero(grid);
    mid.a = s1.a;
    mid.a += s2.a;
    mid.a *= 0.5;
    mid.u = s1.u;
    mid.u += s2.u;
    mid.u *= 0.5;
    mid.b = s1.b;
    mid.b += s2.b;
    mid.b *= 0.5;

    SpectralField db = s2.b;
    db -= s1.b;
    db *= 1.0 / dt;

    SpectralField G = effective_velocity(mid.u, mid.b, params);
    SpectralField res = db;
    res.axpy(params.gamma / params.nu_q(), mid.b);
    res.axpy(params.gamma, divergence(G));

    std::vector<double> acc(grid->size(), 0.0);
    std::vector<std::vector<double>> up;
    for (int c = 0; c < grid->dim(); ++c) up.push_back(physical(mid.u, c));
    for (int d = 0; d < grid->dim(); ++d) {
        auto gp = physical(derivative(mid.b, d));
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += up[d][i] * gp[i];
    }
    auto divu_p = physical(divergence(mid.u));
    auto b_p = physical(mid.b);
    for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] += params.gamma * b_p[i] * divu_p[i];
    SpectralField nl = dealias(from_physical(grid, acc));
    res += nl;
    return {res.l2_norm(), mid.b.l2_norm(), true};
}

}  // namespace thetaflow
