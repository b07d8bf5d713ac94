// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "thetaflow/checkpoint.hpp"
#include "thetaflow/cli.hpp"
#include "thetaflow/csv.hpp"
#include "thetaflow/errors.hpp"
#include "thetaflow/initial_data.hpp"
#include "thetaflow/ledger.hpp"
#include "thetaflow/norms.hpp"
#include "thetaflow/ops.hpp"

using namespace thetaflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config: defaults, rejection paths, canonical round trip") {
    RunConfig def = parse_config_text("", "empty");
    CHECK(def.n == 2);
    CHECK(def.N == 128);
    CHECK(def.L == 4.0);
    CHECK(def.params.gamma == 1.4);
    CHECK(def.params.mu == 1.0);
    CHECK(def.params.lambda == 0.0);
    CHECK(def.params.A == 1.0);
    CHECK(def.j0 == 1);
    CHECK(def.integrator.dt == 1e-3);
    CHECK(def.integrator.T == 10.0);
    CHECK(def.kind == "random-band");

    CHECK_THROWS_AS(parse_config_text("gamma=0.9", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mu=-1", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("frobnicate=1", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("dt=abc", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("dt=1e-3\ndt=2e-3", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("kind=garbage", "bad"), ConfigError);

    // line numbers in diagnostics
    try {
        parse_config_text("n=2\nnope=1\n", "file.cfg");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("file.cfg:2") != std::string::npos);
    }

    std::string text =
        "# comment\nn=2\nN=64\nL=2.5\ngamma=1.7\nmu=0.8\nlambda=0.1\nA=1.25\nj0=1\n"
        "dt=0.002\nT=3.5\nscheme=ifrk2\nkind=single-mode\namplitude=0.001\n"
        "j_lo=0\nj_hi=0\nseed=42\noutdir=/tmp/x\n";
    RunConfig c = parse_config_text(text, "t");
    std::string once = dump_config(c);
    RunConfig c2 = parse_config_text(once, "dump");
    CHECK(dump_config(c2) == once);  // bitwise round trip
    CHECK(c2.integrator.scheme == Scheme::IFRK2);
    CHECK(c2.seed == 42);
}

TEST_CASE("make_initial: normalization, determinism, kinds") {
    RunConfig cfg = parse_config_text("N=64\namplitude=0.01\nseed=9\nj_lo=-2\nj_hi=2", "t");
    auto grid = Grid::make(cfg.n, cfg.N, cfg.L);
    FilterBank bank = build_filter_bank(grid, cfg.j0);

    PerturbationState s = make_initial(cfg, bank);
    CHECK(theorem_norm(bank, s) == doctest::Approx(0.01).epsilon(1e-10));
    CHECK(std::abs(s.a.mean()) == 0.0);
    CHECK(std::abs(s.b.mean()) == 0.0);
    CHECK(s.a.hermitian_defect() < 1e-13);

    PerturbationState s2 = make_initial(cfg, bank);
    SpectralField d = s2.a;
    d -= s.a;
    CHECK(d.l2_norm() == 0.0);  // deterministic given the seed

    RunConfig zero = cfg;
    zero.amplitude = 0.0;
    PerturbationState z = make_initial(zero, bank);
    CHECK(z.a.l2_norm() == 0.0);
    CHECK(z.u.l2_norm() == 0.0);

    // single-mode: exactly one annulus active
    RunConfig sm = cfg;
    sm.kind = "single-mode";
    sm.j_lo = 0;
    PerturbationState one = make_initial(sm, bank);
    int active = 0;
    for (int j = bank.j_min(); j <= bank.j_max(); ++j)
        if (bank.block_l2(one.b, j) > 1e-14) ++active;
    CHECK(active == 1);

    // taylor-green: divergence-free velocity only
    RunConfig tg = cfg;
    tg.kind = "taylor-green";
    PerturbationState t = make_initial(tg, bank);
    CHECK(t.a.l2_norm() == 0.0);
    CHECK(divergence(t.u).l2_norm() < 1e-12 * t.u.l2_norm());
    CHECK(theorem_norm(bank, t) == doctest::Approx(0.01).epsilon(1e-10));

    // band outside the grid
    RunConfig far = cfg;
    far.j_lo = far.j_hi = 40;
    CHECK_THROWS_AS(make_initial(far, bank), ConfigError);
}

TEST_CASE("make_initial: checkpoint kind round trips") {
    RunConfig cfg = parse_config_text("N=32\namplitude=0.01\nseed=5", "t");
    auto grid = Grid::make(cfg.n, cfg.N, cfg.L);
    FilterBank bank = build_filter_bank(grid, cfg.j0);
    PerturbationState s = make_initial(cfg, bank);

    fs::path dir = fresh_dir("tf_cli_ckpt");
    std::string path = (dir / "state.thfl").string();
    checkpoint_save(s, 0.5, path);

    RunConfig from = cfg;
    from.kind = "checkpoint";
    from.checkpoint = path;
    PerturbationState loaded = make_initial(from, bank);
    SpectralField d = loaded.b;
    d -= s.b;
    CHECK(d.l2_norm() == 0.0);
    CHECK(loaded.grid().get() == grid.get());

    RunConfig mismatch = from;
    mismatch.N = 64;
    auto grid64 = Grid::make(2, 64, 4.0);
    FilterBank bank64 = build_filter_bank(grid64, 1);
    CHECK_THROWS_AS(make_initial(mismatch, bank64), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("run pipeline: outputs, idempotent rerun, determinism") {
    fs::path dir = fresh_dir("tf_cli_run");
    RunConfig cfg = parse_config_text(
        "N=32\nT=0.05\ndt=1e-3\namplitude=0.005\nseed=3\nj_lo=-2\nj_hi=0\noutdir=" +
            dir.string(),
        "t");
    RunOutputs out = run_pipeline(cfg, /*quiet=*/true);
    CHECK(out.exit_code == kExitOk);
    CHECK(out.E0 == doctest::Approx(0.005).epsilon(1e-9));
    CHECK(std::isfinite(out.fitted_C));
    for (const char* f : {"energy.csv", "blocks.csv", "rates.csv", "constants.csv",
                          "final.thfl"})
        CHECK(fs::exists(dir / f));

    std::string energy_a = slurp(dir / "energy.csv");
    CHECK(energy_a.find("# schema: thetaflow-energy-v1") == 0);
    RunOutputs out2 = run_pipeline(cfg, /*quiet=*/true);
    CHECK(out2.exit_code == kExitOk);
    CHECK(slurp(dir / "energy.csv") == energy_a);  // byte-identical rerun

    // zero amplitude: trivially completes with E = 0
    RunConfig zero = cfg;
    zero.amplitude = 0.0;
    RunOutputs oz = run_pipeline(zero, /*quiet=*/true);
    CHECK(oz.exit_code == kExitOk);
    CHECK(oz.max_E == 0.0);
    fs::remove_all(dir);
}

TEST_CASE("run pipeline: blowup exits with code 2 and a reason") {
    fs::path dir = fresh_dir("tf_cli_blowup");
    RunConfig cfg = parse_config_text(
        "N=32\nT=2\ndt=2e-2\namplitude=40\nseed=12\nj_lo=-2\nj_hi=0\nblowup_norm=1e3"
        "\noutdir=" +
            dir.string(),
        "t");
    RunOutputs out = run_pipeline(cfg, /*quiet=*/true);
    CHECK(out.exit_code == kExitBlowup);
    CHECK_FALSE(out.reason.empty());
    CHECK(fs::exists(dir / "energy.csv"));  // partial ledger still written
    fs::remove_all(dir);
}

TEST_CASE("sweep: cells, summary, determinism against single runs") {
    fs::path dir = fresh_dir("tf_cli_sweep");
    RunConfig base = parse_config_text(
        "N=32\nT=0.03\ndt=1e-3\namplitude=0.005\nseed=3\nj_lo=-2\nj_hi=0\noutdir=" +
            dir.string(),
        "t");
    int rc = cmd_sweep(base, "amplitude=0.002,0.004;gamma=1.2,1.6");
    CHECK(rc == kExitOk);
    CHECK(fs::exists(dir / "summary.csv"));
    for (int i = 0; i < 4; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "cell_%03d", i);
        CHECK(fs::exists(dir / name / "energy.csv"));
    }
    std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.find("amplitude=0.002,gamma=1.2") != std::string::npos);
    CHECK(summary.find("amplitude=0.004,gamma=1.6") != std::string::npos);

    // a single cell reproduces a plain run of the same config
    RunConfig solo = parse_config_text("amplitude=0.002\ngamma=1.2", "cell", base);
    solo.outdir = (dir / "solo").string();
    run_pipeline(solo, /*quiet=*/true);
    std::string cell_energy = slurp(dir / "cell_000" / "energy.csv");
    CHECK(slurp(dir / "solo" / "energy.csv") == cell_energy);

    CHECK_THROWS_AS(cmd_sweep(base, ""), ConfigError);
    CHECK_THROWS_AS(cmd_sweep(base, "amplitude"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("check battery passes on a small grid and fails when corrupted") {
    fs::path dir = fresh_dir("tf_cli_check");
    RunConfig cfg = parse_config_text(
        "N=32\nT=0.5\ndt=1e-3\namplitude=0.001\nseed=3\nj_lo=-2\nj_hi=0\noutdir=" +
            dir.string(),
        "t");
    CHECK(cmd_check(cfg) == kExitOk);
    CHECK(cmd_check(cfg, /*corrupt_bank=*/true) == kExitConfig);
    fs::remove_all(dir);
}

TEST_CASE("check battery runs the direct-summation oracle on a tiny grid") {
    RunConfig cfg = parse_config_text("N=8\nT=0.01\ndt=1e-3\nj0=-3\nj_lo=-3\nj_hi=-3"
                                      "\namplitude=1e-4",
                                      "t");
    CHECK(cmd_check(cfg) == kExitOk);
}

TEST_CASE("linear command writes the dispersion table") {
    fs::path dir = fresh_dir("tf_cli_linear");
    RunConfig cfg = parse_config_text("N=32\noutdir=" + dir.string(), "t");
    CHECK(cmd_linear(cfg) == kExitOk);
    std::string disp = slurp(dir / "dispersion.csv");
    CHECK(disp.find("# schema: thetaflow-dispersion-v1") == 0);
    CHECK(disp.find("re_lambda_plus") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("csv writer escapes per RFC 4180") {
    CHECK(CsvWriter::escape("plain") == "plain");
    CHECK(CsvWriter::escape("a,b") == "\"a,b\"");
    CHECK(CsvWriter::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(CsvWriter::escape("line\nbreak") == "\"line\nbreak\"");
}
