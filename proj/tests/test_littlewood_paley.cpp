// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "thetaflow/errors.hpp"
#include "thetaflow/norms.hpp"
#include "thetaflow/ops.hpp"
#include "thetaflow/probes.hpp"
#include "thetaflow/random_fields.hpp"

using namespace thetaflow;

namespace {

FilterBank bank64() { return build_filter_bank(Grid::make(2, 64, 4.0), 1); }

SpectralField random_zero_mean(const FilterBank& bank, unsigned seed) {
    std::mt19937_64 rng(seed);
    return random_band_scalar(bank, bank.j_min(), bank.j_max(), rng);
}

}  // namespace

TEST_CASE("filter bank: profile values and support") {
    CHECK(FilterBank::chi(0.5) == 1.0);
    CHECK(FilterBank::chi(0.75) == 1.0);
    CHECK(FilterBank::chi(1.5) == 0.0);
    CHECK(FilterBank::chi(4.0 / 3.0) == 0.0);
    double psi1 = FilterBank::psi(1.0);
    CHECK(psi1 == 1.0 - FilterBank::chi(1.0));
    CHECK(psi1 >= 0.0);
    CHECK(psi1 <= 1.0);
    // psi supported in [3/4, 8/3]
    CHECK(FilterBank::psi(0.74) == 0.0);
    CHECK(FilterBank::psi(2.7) == 0.0);
    CHECK(FilterBank::psi(1.4) == 1.0);  // pure band [4/3, 3/2]
    // monotonicity of chi
    double prev = 1.0;
    for (double r = 0.0; r < 2.0; r += 0.01) {
        double c = FilterBank::chi(r);
        CHECK(c <= prev + 1e-15);
        prev = c;
    }
}

TEST_CASE("filter bank: partition of unity on the 64^2 and 128^2 grids") {
    for (int N : {64, 128}) {
        FilterBank bank = build_filter_bank(Grid::make(2, N, 4.0), 1);
        const auto& grid = bank.grid();
        std::vector<double> sum(grid->size(), 0.0);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
            const auto& w = bank.psi_weights(j);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w[i];
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < sum.size(); ++i)
            if (grid->modulus(i) > 0.0) worst = std::max(worst, std::abs(sum[i] - 1.0));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("filter bank: grid too coarse for j0 is rejected") {
    auto grid = Grid::make(2, 64, 4.0);
    FilterBank bank = build_filter_bank(grid, 1);
    CHECK(bank.j_min() <= -3);
    CHECK(bank.j_max() >= 3);
    CHECK_THROWS_AS(build_filter_bank(grid, bank.j_max()), ConfigError);
    CHECK_THROWS_AS(build_filter_bank(grid, bank.j_min() - 1), ConfigError);
}

TEST_CASE("dyadic blocks: support, partition, zero mode") {
    FilterBank bank = bank64();
    const auto& grid = bank.grid();

    // |k| = 2 lives in blocks 0 and 1 only, and they reconstruct it.
    SpectralField z = SpectralField::scalar(grid);
    auto idx = grid->index({8, 0, 0});  // k = 2
    z.at(0, idx) = cplx(0.5, 0.0);
    z.at(0, grid->conj_index(idx)) = cplx(0.5, 0.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
        double bn = bank.block_l2(z, j);
        if (j == 0 || j == 1) CHECK(bn > 0.0);
        else CHECK(bn == 0.0);
    }
    SpectralField rec = dyadic_block(bank, 0, z);
    rec += dyadic_block(bank, 1, z);
    rec -= z;
    CHECK(rec.l2_norm() < 1e-12 * z.l2_norm());

    // random zero-mean reconstruction
    SpectralField r = random_zero_mean(bank, 23);
    SpectralField sum = SpectralField::scalar(grid);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += dyadic_block(bank, j, r);
    sum -= r;
    CHECK(sum.l2_norm() < 1e-10 * r.l2_norm());

    // constants are annihilated
    SpectralField c = SpectralField::scalar(grid);
    c.at(0, 0) = cplx(4.0, 0.0);
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        CHECK(bank.block_l2(c, j) == 0.0);

    // out-of-range block: zero field plus flag
    bool ok = true;
    SpectralField zero = dyadic_block(bank, bank.j_max() + 3, r, &ok);
    CHECK_FALSE(ok);
    CHECK(zero.l2_norm() == 0.0);
}

TEST_CASE("quasi-orthogonality of distant blocks") {
    FilterBank bank = bank64();
    SpectralField z = random_zero_mean(bank, 29);
    double zn = z.l2_norm();
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        for (int jp = j + 2; jp <= bank.j_max(); ++jp) {
            SpectralField zz = dyadic_block(bank, jp, dyadic_block(bank, j, z));
            CHECK(zz.l2_norm() < 1e-12 * zn);
        }
}

TEST_CASE("low cutoff: telescoping and boundary cases") {
    FilterBank bank = bank64();
    SpectralField z = random_zero_mean(bank, 31);

    SpectralField all = low_cutoff(bank, bank.j_max() + 1, z);
    all -= z;
    CHECK(all.l2_norm() < 1e-10 * z.l2_norm());

    CHECK(low_cutoff(bank, bank.j_min(), z).l2_norm() < 1e-12 * z.l2_norm());

    for (int j : {-1, 0, 1, 2}) {
        SpectralField lhs = low_cutoff(bank, j + 1, z);
        lhs -= low_cutoff(bank, j, z);
        lhs -= dyadic_block(bank, j, z);
        CHECK(lhs.l2_norm() < 1e-12 * z.l2_norm());
    }
}

TEST_CASE("besov norm: values, bounds, homogeneity") {
    FilterBank bank = bank64();
    const auto& grid = bank.grid();

    CHECK(besov_norm(bank, SpectralField::scalar(grid), 1.0) == 0.0);

    SpectralField z = random_zero_mean(bank, 37);
    double l2 = z.l2_norm();
    // At most two psi blocks overlap a mode and they sum to 1, so
    // sum psi^2 lies in [1/2, 1] and the l2-summed norm is squeezed between
    // ||z||/sqrt(2) and ||z||.
    double b02 = besov_norm(bank, z, 0.0, Summability::L2);
    CHECK(b02 >= l2 / std::sqrt(2.0) * (1.0 - 1e-12));
    CHECK(b02 <= l2 * (1.0 + 1e-12));

    // single-annulus field: the norm is the weighted sum of its two blocks
    SpectralField s = SpectralField::scalar(grid);
    auto idx = grid->index({8, 0, 0});  // |k| = 2
    s.at(0, idx) = cplx(0.5, 0.0);
    s.at(0, grid->conj_index(idx)) = cplx(0.5, 0.0);
    for (double sexp : {-1.0, 0.0, 1.0, 1.7}) {
        double expect = std::pow(2.0, 0.0 * sexp) * bank.block_l2(s, 0) +
                        std::pow(2.0, 1.0 * sexp) * bank.block_l2(s, 1);
        CHECK(besov_norm(bank, s, sexp) == doctest::Approx(expect).epsilon(1e-12));
    }

    SpectralField scaled = z;
    scaled *= -2.5;
    CHECK(besov_norm(bank, scaled, 1.0) ==
          doctest::Approx(2.5 * besov_norm(bank, z, 1.0)).epsilon(1e-12));
}

TEST_CASE("split low/high: supports and reconstruction") {
    FilterBank bank = bank64();
    const auto& grid = bank.grid();

    // far below the split: entirely low
    SpectralField lowmode = SpectralField::scalar(grid);
    auto li = grid->index({1, 0, 0});  // |k| = 1/4 << 2^{j0}
    lowmode.at(0, li) = cplx(0.5, 0.0);
    lowmode.at(0, grid->conj_index(li)) = cplx(0.5, 0.0);
    auto [ll, lh] = split_low_high(bank, lowmode);
    CHECK(lh.l2_norm() < 1e-14);
    SpectralField dl = ll;
    dl -= lowmode;
    CHECK(dl.l2_norm() < 1e-14);

    // far above: entirely high
    SpectralField highmode = SpectralField::scalar(grid);
    auto hi = grid->index({0, 40, 0});  // |k| = 10 >> 2^{j0}
    highmode.at(0, hi) = cplx(0.5, 0.0);
    highmode.at(0, grid->conj_index(hi)) = cplx(0.5, 0.0);
    auto [hl, hh] = split_low_high(bank, highmode);
    CHECK(hl.l2_norm() < 1e-14);

    // low support below (8/3) 2^{j0}, high above (3/4) 2^{j0+1}
    SpectralField r = random_zero_mean(bank, 41);
    auto [rl, rh] = split_low_high(bank, r);
    double top = 8.0 / 3.0 * std::ldexp(1.0, bank.j0());
    double bottom = 0.75 * std::ldexp(1.0, bank.j0() + 1);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        if (grid->modulus(i) > top) CHECK(std::abs(rl.at(0, i)) == 0.0);
        if (grid->modulus(i) < bottom && grid->modulus(i) > 0.0)
            CHECK(std::abs(rh.at(0, i)) == 0.0);
    }
    SpectralField sum = rl;
    sum += rh;
    sum -= r;
    CHECK(sum.l2_norm() < 1e-10 * r.l2_norm());
}

TEST_CASE("chemin-lerner accumulation: frozen, linear-decay, ordering") {
    FilterBank bank = bank64();
    SpectralField z = random_zero_mean(bank, 43);
    double inst = besov_norm(bank, z, 1.0);

    BlockHistory constant;
    for (int i = 0; i <= 10; ++i) constant.add(0.1 * i, bank.block_l2_table(z));
    CHECK(chemin_lerner_accumulate(constant, bank, TimeNorm::Linf, 1.0) ==
          doctest::Approx(inst).epsilon(1e-12));
    CHECK(chemin_lerner_accumulate(constant, bank, TimeNorm::L1, 1.0) ==
          doctest::Approx(inst).epsilon(1e-12));  // horizon T = 1

    // exact integral of e^{-t} over [0, 1]
    BlockHistory decay;
    const int steps = 1000;
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        auto table = bank.block_l2_table(z);
        for (auto& v : table) v *= std::exp(-t);
        decay.add(t, std::move(table));
    }
    double expect = (1.0 - std::exp(-1.0)) * inst;
    CHECK(std::abs(chemin_lerner_accumulate(decay, bank, TimeNorm::L1, 1.0) - expect) <
          1e-4 * inst);

    // empty history
    CHECK(chemin_lerner_accumulate(BlockHistory{}, bank, TimeNorm::L1, 1.0) == 0.0);

    // streaming accumulator agrees and dominates the instantaneous norm
    ChemindLernerAccumulator acc(bank);
    for (int i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / steps;
        auto table = bank.block_l2_table(z);
        for (auto& v : table) v *= std::exp(-t);
        acc.add_sample(t, table);
        CHECK(acc.norm(TimeNorm::Linf, 1.0) >= acc.instantaneous(1.0) - 1e-14);
    }
    CHECK(acc.norm(TimeNorm::L1, 1.0) ==
          doctest::Approx(chemin_lerner_accumulate(decay, bank, TimeNorm::L1, 1.0))
              .epsilon(1e-12));
    // monotone in the horizon
    double before = acc.norm(TimeNorm::L1, 1.0);
    auto table = bank.block_l2_table(z);
    acc.add_sample(1.5, table);
    CHECK(acc.norm(TimeNorm::L1, 1.0) >= before);
}

TEST_CASE("bernstein ratios on annulus-localized fields") {
    FilterBank bank = bank64();
    const auto& grid = bank.grid();

    // pure mode at |k| = 2^j: first-order ratio is exactly 1
    SpectralField pure = SpectralField::scalar(grid);
    auto idx = grid->index({8, 0, 0});  // |k| = 2 = 2^1
    pure.at(0, idx) = cplx(0.5, 0.0);
    pure.at(0, grid->conj_index(idx)) = cplx(0.5, 0.0);
    CHECK(bernstein_ratio(bank, pure, 1, 1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(bernstein_ratio(bank, pure, 1, 0) == doctest::Approx(1.0).epsilon(1e-13));

    // random annulus field: ratio within the annulus moduli bounds
    std::mt19937_64 rng(47);
    SpectralField blk = dyadic_block(bank, 1, random_band_scalar(bank, 1, 1, rng));
    double ratio = bernstein_ratio(bank, blk, 1, 1);
    CHECK(ratio >= 0.75 - 1e-12);
    CHECK(ratio <= 8.0 / 3.0 + 1e-12);

    // not localized -> precondition violation
    SpectralField wide = random_zero_mean(bank, 49);
    CHECK_THROWS_AS(bernstein_ratio(bank, wide, 1, 1), PreconditionError);
    CHECK_THROWS_AS(bernstein_ratio(bank, SpectralField::scalar(grid), 1, 1),
                    PreconditionError);
}

TEST_CASE("lemma probes: commutator with constant velocity vanishes") {
    FilterBank bank = bank64();
    const auto& grid = bank.grid();
    std::mt19937_64 rng(53);
    SpectralField v = random_band_scalar(bank, -1, 2, rng);
    SpectralField u(grid, 2);
    u.at(0, 0) = cplx(0.7, 0.0);  // constant velocity
    u.at(1, 0) = cplx(-0.3, 0.0);

    auto advect = [&](const SpectralField& w) {
        std::vector<double> acc(grid->size(), 0.0);
        for (int d = 0; d < 2; ++d) {
            auto up = physical(u, d);
            auto gp = physical(derivative(w, d));
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += up[i] * gp[i];
        }
        return dealias(from_physical(grid, acc));
    };
    SpectralField full = advect(v);
    for (int j = -1; j <= 2; ++j) {
        SpectralField commut = dyadic_block(bank, j, full);
        commut -= advect(dyadic_block(bank, j, v));
        CHECK(commut.l2_norm() < 1e-12 * std::max(1.0, v.l2_norm()));
    }
}

TEST_CASE("lemma probes: exact heat decay of a single mode has unit ratio") {
    FilterBank bank = bank64();
    const auto& grid = bank.grid();
    SpectralField u0 = SpectralField::scalar(grid);
    auto idx = grid->index({6, 2, 0});
    u0.at(0, idx) = cplx(0.5, 0.0);
    u0.at(0, grid->conj_index(idx)) = cplx(0.5, 0.0);
    double r2 = grid->modulus(idx) * grid->modulus(idx);

    double sigma = 0.0;
    ChemindLernerAccumulator acc(bank);
    for (int m = 0; m <= 100; ++m) {
        double t = 0.01 * m;
        auto table = bank.block_l2_table(u0);
        for (auto& v : table) v *= std::exp(-r2 * t);
        acc.add_sample(t, table);
    }
    CHECK(acc.norm(TimeNorm::Linf, sigma) ==
          doctest::Approx(besov_norm(bank, u0, sigma)).epsilon(1e-12));
}

TEST_CASE("lemma probes: randomized report is finite and sane") {
    FilterBank bank = bank64();
    LemmaProbeReport rep = run_lemma_probes(bank, 5, 101);
    CHECK(rep.trials == 5);
    CHECK(std::isfinite(rep.product_ratio));
    CHECK(rep.product_ratio > 0.0);
    CHECK(std::isfinite(rep.commutator_ratio));
    CHECK(std::isfinite(rep.composition_ratio));
    CHECK(rep.composition_ratio > 0.0);
    CHECK(std::isfinite(rep.heat_inf_ratio));
    CHECK(rep.heat_inf_ratio > 0.0);
    CHECK(std::isfinite(rep.heat_l1_ratio));
    CHECK_THROWS_AS(run_lemma_probes(bank, 0, 1), PreconditionError);
}
