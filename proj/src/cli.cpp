// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

#include "thetaflow/checkpoint.hpp"
#include "thetaflow/csv.hpp"
#include "thetaflow/errors.hpp"
#include "thetaflow/initial_data.hpp"
#include "thetaflow/ledger.hpp"
#include "thetaflow/ops.hpp"
#include "thetaflow/probes.hpp"
#include "thetaflow/random_fields.hpp"

namespace thetaflow {

namespace fs = std::filesystem;

namespace {

std::string f(double v) { return CsvWriter::field(v); }

void write_energy_csv(const std::string& path, const std::vector<EnergyRecord>& records) {
    CsvWriter csv(path, "thetaflow-energy-v1",
                  {"t", "inst_low", "inst_high", "cl_inf_low", "cl_inf_high", "l1_low_bu",
                   "l1_high_b", "E"});
    for (const auto& r : records)
        csv.row({f(r.t), f(r.inst_low), f(r.inst_high), f(r.cl_inf_low), f(r.cl_inf_high),
                 f(r.l1_low_bu), f(r.l1_high_b), f(r.E)});
}

void write_blocks_csv(const std::string& path, const BlockLedger& blocks) {
    CsvWriter csv(path, "thetaflow-blocks-v1",
                  {"t", "j", "b_block_l2", "lyap_b_l2", "lyap_v_l2", "lyap_lam_b_l2",
                   "lyap_cross", "lyap_sq", "f_low_l2"});
    const auto& t = blocks.times();
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (int j = blocks.k_min(); j <= blocks.j_max(); ++j) {
            std::vector<std::string> row{
                f(t[i]), CsvWriter::field(j),
                f(blocks.b_blocks()[static_cast<std::size_t>(j - blocks.k_min())][i])};
            if (j <= blocks.j0()) {
                const auto& blk =
                    blocks.low_blocks()[static_cast<std::size_t>(j - blocks.k_min())][i];
                row.insert(row.end(),
                           {f(blk.b_l2), f(blk.v_l2), f(blk.lam_b_l2), f(blk.cross),
                            f(blk.value_sq),
                            f(blocks.f_low_norms()[static_cast<std::size_t>(
                                j - blocks.k_min())][i])});
            } else {
                row.insert(row.end(), {"", "", "", "", "", ""});
            }
            csv.row(row);
        }
    }
}

void write_rates_csv(const std::string& path, const BlockLedger& blocks) {
    CsvWriter csv(path, "thetaflow-rates-v1",
                  {"j", "fitted_rate", "predicted_re_lambda", "rel_error"});
    for (const auto& row : high_freq_damping_check(blocks)) {
        double rel = row.predicted_rate != 0.0
                         ? std::abs(row.fitted_rate - row.predicted_rate) / row.predicted_rate
                         : 0.0;
        csv.row({CsvWriter::field(row.j), f(row.fitted_rate), f(row.predicted_rate), f(rel)});
    }
}

void write_constants_csv(const std::string& path, const RunConfig& cfg,
                         const BlockLedger& blocks, double continuity_C,
                         std::optional<double> heat_ratio) {
    std::string res = "N=" + std::to_string(cfg.N);
    CsvWriter csv(path, "thetaflow-constants-v1", {"check", "constant", "resolution"});
    csv.row({"continuity_C", f(continuity_C), res});
    if (heat_ratio) csv.row({"heat_pu_ratio", f(*heat_ratio), res});
    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    for (const auto& series : blocks.low_blocks())
        for (const auto& blk : series) {
            double ratio = blk.coercivity_ratio();
            if (ratio > 0.0) {
                cmin = std::min(cmin, ratio);
                cmax = std::max(cmax, ratio);
            }
        }
    if (cmax > 0.0) {
        csv.row({"lyapunov_coercivity_min", f(cmin), res});
        csv.row({"lyapunov_coercivity_max", f(cmax), res});
    }
    if (blocks.times().size() >= 3)
        for (const auto& row : block_decay_check(blocks))
            csv.row({"block_decay_c@k=" + std::to_string(row.k), f(row.c_fit), res});
}

}  // namespace

RunOutputs run_pipeline(const RunConfig& config, bool quiet) {
    config.validate();
    fs::create_directories(config.outdir);
    auto grid = Grid::make(config.n, config.N, config.L);
    FilterBank bank = build_filter_bank(grid, config.j0);
    PerturbationState initial = make_initial(config, bank);

    EnergyLedger energy(bank);
    BlockLedger blocks(bank, config.params, /*with_sources=*/true, config.integrator.floor);
    KernelTracker kernel(initial, config.params);
    HeatCheckLedger heat(bank, config.params, config.integrator.floor);

    auto callback = [&](const PerturbationState& s, double t, long) {
        energy.add_sample(s, t);
        blocks.add_sample(s, t);
        kernel.add_sample(s);
        heat.add_sample(s, t);
    };
    RunSummary summary = run(initial, config.integrator, config.params, &bank, callback);

    write_energy_csv(config.outdir + "/energy.csv", energy.records());
    write_blocks_csv(config.outdir + "/blocks.csv", blocks);
    write_rates_csv(config.outdir + "/rates.csv", blocks);
    double C = continuity_inequality_check(energy.records());
    write_constants_csv(config.outdir + "/constants.csv", config, blocks, C, heat.ratio());
    checkpoint_save(summary.state, summary.t, config.outdir + "/final.thfl");

    RunOutputs out;
    out.E0 = energy.initial_energy();
    out.max_E = energy.max_energy();
    out.fitted_C = C;
    out.exit_code = summary.status == Termination::Completed ? kExitOk : kExitBlowup;
    out.reason = summary.reason;
    if (!quiet) {
        std::cout << "run: " << summary.reason << " at t=" << summary.t << " after "
                  << summary.steps << " steps\n";
        std::cout << "run: E0=" << out.E0 << " max_E=" << out.max_E
                  << " continuity_C=" << out.fitted_C << "\n";
        std::cout << "run: kernel_drift=" << kernel.max_relative_drift() << "\n";
        std::cout << "run: outputs in " << config.outdir << "\n";
    }
    return out;
}

int cmd_run(const RunConfig& config) { return run_pipeline(config).exit_code; }

int cmd_linear(const RunConfig& config) {
    config.validate();
    fs::create_directories(config.outdir);
    auto grid = Grid::make(config.n, config.N, config.L);

    std::set<double> moduli;
    for (std::size_t i = 0; i < grid->size(); ++i)
        if (grid->modulus(i) > 0.0) moduli.insert(grid->modulus(i));

    CsvWriter csv(config.outdir + "/dispersion.csv", "thetaflow-dispersion-v1",
                  {"r", "re_lambda_plus", "im_lambda_plus", "re_lambda_minus",
                   "im_lambda_minus", "ker_a", "ker_b", "ker_v"});
    double worst = 0.0;
    for (double r : moduli) {
        LinearEigen e = lin_eigenvalues(r, config.params);
        csv.row({f(r), f(e.lambda_plus.real()), f(e.lambda_plus.imag()),
                 f(e.lambda_minus.real()), f(e.lambda_minus.imag()), f(e.kernel[0]),
                 f(e.kernel[1]), f(e.kernel[2])});
        DenseEigenCheck check = dense_vs_closed_eigen(r, config.params);
        worst = std::max({worst, check.eigenvalue_dev, check.kernel_dev});
    }
    std::cout << "linear: " << moduli.size() << " moduli, max closed-form/dense deviation "
              << worst << "\n";
    std::cout << "linear: dispersion table in " << config.outdir << "/dispersion.csv\n";
    return worst < 1e-10 ? kExitOk : kExitConfig;
}

// ---- check battery ------------------------------------------------------------

namespace {

struct CheckOutcome {
    bool pass;
    std::string name;
    double value;
    std::string note;
};

// Direct-summation DFT, the independent oracle for tiny grids.
std::vector<cplx> direct_dft(const Grid& g, const std::vector<double>& samples) {
    std::vector<cplx> out(g.size(), cplx(0.0, 0.0));
    const double two_pi = 2.0 * std::numbers::pi;
    const int n = g.dim();
    const int N = g.modes_per_axis();
    std::array<std::size_t, 3> stride{};
    stride[static_cast<std::size_t>(n - 1)] = 1;
    for (int d = n - 2; d >= 0; --d)
        stride[static_cast<std::size_t>(d)] =
            stride[static_cast<std::size_t>(d + 1)] * static_cast<std::size_t>(N);
    for (std::size_t k = 0; k < g.size(); ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t x = 0; x < g.size(); ++x) {
            double phase = 0.0;
            for (int d = 0; d < n; ++d) {
                auto xi = (x / stride[static_cast<std::size_t>(d)]) %
                          static_cast<std::size_t>(N);
                phase += static_cast<double>(g.mode(k, d)) * static_cast<double>(xi);
            }
            acc += samples[x] * std::polar(1.0, -two_pi * phase / N);
        }
        out[k] = acc / static_cast<double>(g.size());
    }
    return out;
}

}  // namespace

int cmd_check(const RunConfig& config, bool corrupt_bank) {
    config.validate();
    auto grid = Grid::make(config.n, config.N, config.L);
    FilterBank bank = build_filter_bank(grid, config.j0);
    if (corrupt_bank) bank.corrupt_block_for_tests(config.j0, 1.01);
    std::mt19937_64 rng(config.seed);
    std::vector<CheckOutcome> results;
    auto record = [&](const std::string& name, bool pass, double value,
                      const std::string& note = {}) {
        results.push_back({pass, name, value, note});
    };

    // Partition of unity over nonzero modes.
    {
        double worst = 0.0;
        std::vector<double> sum(grid->size(), 0.0);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) {
            const auto& w = bank.psi_weights(j);
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w[i];
        }
        for (std::size_t i = 0; i < sum.size(); ++i)
            if (grid->modulus(i) > 0.0) worst = std::max(worst, std::abs(sum[i] - 1.0));
        record("partition_of_unity", worst < 1e-12, worst);
    }

    // Reconstruction and quasi-orthogonality.
    {
        SpectralField z = random_band_scalar(bank, bank.j_min(), bank.j_max(), rng);
        SpectralField sum = SpectralField::scalar(grid);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j) sum += dyadic_block(bank, j, z);
        sum -= z;
        double rec = z.l2_norm() > 0.0 ? sum.l2_norm() / z.l2_norm() : 0.0;
        record("block_reconstruction", rec < 1e-10, rec);

        double ortho = 0.0;
        for (int j = bank.j_min(); j <= bank.j_max(); ++j)
            for (int jp = j + 2; jp <= bank.j_max(); ++jp) {
                SpectralField zz = dyadic_block(bank, jp, dyadic_block(bank, j, z));
                ortho = std::max(ortho, zz.l2_norm() / std::max(z.l2_norm(), 1e-300));
            }
        record("quasi_orthogonality", ortho < 1e-12, ortho);
    }

    // Projector algebra.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            SpectralField u = random_band_vector(bank, bank.j_min(), bank.j_max(), rng);
            double un = u.l2_norm();
            if (un == 0.0) continue;
            auto parts = helmholtz(u);
            SpectralField sum = parts.p;
            sum += parts.q;
            sum -= u;
            worst = std::max(worst, sum.l2_norm() / un);
            SpectralField pp = leray_project(parts.p);
            pp -= parts.p;
            worst = std::max(worst, pp.l2_norm() / un);
            SpectralField pq = leray_project(parts.q);
            worst = std::max(worst, pq.l2_norm() / un);
            worst = std::max(worst, divergence(parts.p).l2_norm() / un);
            worst = std::max(worst, std::abs(inner_product(parts.p, parts.q)) / (un * un));
        }
        record("helmholtz_algebra", worst < 1e-10, worst);
    }

    // Symbol consistency and Parseval.
    {
        SpectralField z = random_band_scalar(bank, bank.j_min(), bank.j_max(), rng);
        double zn = std::max(z.l2_norm(), 1e-300);
        SpectralField lap2 = fractional_laplacian(z, 2.0);
        SpectralField mlap = fractional_laplacian(fractional_laplacian(z, 1.0), 1.0);
        lap2 -= mlap;
        double dsym = lap2.l2_norm() / zn;
        SpectralField lhs = fractional_laplacian(divergence(gradient(z)), -1.0);
        lhs += fractional_laplacian(z, 1.0);  // Lambda^{-1} div grad = -Lambda
        dsym = std::max(dsym, lhs.l2_norm() / zn);
        record("symbol_consistency", dsym < 1e-12, dsym);

        double par = std::abs(l2_norm_physical(z) - z.l2_norm()) / zn;
        record("parseval", par < 1e-12, par);
    }

    // Transform oracle by direct summation on tiny grids.
    if (config.N <= 16) {
        std::vector<double> samples(grid->size());
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (auto& v : samples) v = gauss(rng);
        SpectralField via_fft = from_physical(grid, samples);
        auto direct = direct_dft(*grid, samples);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            scale = std::max(scale, std::abs(direct[i]));
            diff = std::max(diff, std::abs(direct[i] - via_fft.at(0, i)));
        }
        record("fft_vs_direct_summation", diff < 1e-12 * std::max(scale, 1.0), diff);
    }

    // Lemma probes: hard gate is finiteness.
    {
        LemmaProbeReport rep = run_lemma_probes(bank, 20, config.seed);
        bool finite = std::isfinite(rep.product_ratio) && std::isfinite(rep.commutator_ratio) &&
                      std::isfinite(rep.composition_ratio) && std::isfinite(rep.heat_inf_ratio) &&
                      std::isfinite(rep.heat_l1_ratio);
        record("lemma_probes_finite", finite, rep.product_ratio,
               "product=" + f(rep.product_ratio) + " commutator=" + f(rep.commutator_ratio) +
                   " composition=" + f(rep.composition_ratio) +
                   " heat_inf=" + f(rep.heat_inf_ratio) + " heat_l1=" + f(rep.heat_l1_ratio));
    }

    // Residual suite on a short linear-regime trajectory.
    {
        RunConfig small = config;
        small.kind = "random-band";
        small.amplitude = std::min(config.amplitude, 1e-3);
        small.j_lo = std::max(config.j_lo, bank.j_min());
        small.j_hi = std::min(config.j_hi, bank.j_max() - 1);
        PerturbationState state = make_initial(small, bank);
        IntegratorConfig icfg = config.integrator;
        icfg.T = 0.5;
        icfg.snapshot_interval = 1000000;  // no intermediate samples needed
        RunSummary sum = run(state, icfg, config.params, &bank, {});
        StepOperator op = make_step_operator(grid, config.params, icfg.dt);
        PerturbationState next =
            step(sum.state, op, config.params, icfg.scheme, icfg.floor);

        auto phi = residual_phi_equation(sum.state, next, icfg.dt, config.params);
        record("residual_phi", phi.relative() < 1e-4, phi.relative());
        auto ge = residual_G_equation(sum.state, next, icfg.dt, config.params);
        if (ge.supported) record("residual_G", ge.relative() < 1e-4, ge.relative());
        auto hb = residual_damped_b_equation(sum.state, next, icfg.dt, config.params);
        record("residual_damped_b", hb.relative() < 1e-4, hb.relative());

        // Negative control: a mismatched pair must be flagged.
        PerturbationState wrong = next;
        wrong.b *= -1.0;
        auto bad = residual_phi_equation(sum.state, wrong, icfg.dt, config.params);
        record("residual_negative_control", bad.relative() > 1e-2, bad.relative());
    }

    // Formulation consistency mm1 vs mm3, short horizon.
    {
        RunConfig small = config;
        small.kind = "random-band";
        small.amplitude = 1e-2;
        small.j_lo = std::max(-2, bank.j_min());
        small.j_hi = std::min(-1, bank.j_max() - 1);
        small.seed = config.seed + 1;
        PerturbationState z0 = make_initial(small, bank);
        IntegratorConfig icfg = config.integrator;
        icfg.T = 0.25;
        RunSummary mm3run = run(z0, icfg, config.params, &bank, {});
        PrimitiveState prim0 = to_primitive(z0, config.params);
        PrimitiveState prim1 = run_mm1(prim0, icfg.dt, icfg.T, config.params);
        SpectralField P_mm1 = pressure_law(prim1.rho, prim1.theta, config.params);
        SpectralField P_mm3 = from_perturbation(mm3run.state).P;
        auto pa = physical(P_mm1);
        auto pb = physical(P_mm3);
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < pa.size(); ++i) {
            scale = std::max(scale, std::abs(pa[i]));
            diff = std::max(diff, std::abs(pa[i] - pb[i]));
        }
        record("mm1_mm3_consistency", diff / scale < 1e-5, diff / scale);
    }

    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << " value=" << r.value;
        if (!r.note.empty()) std::cout << " [" << r.note << "]";
        std::cout << "\n";
        if (!r.pass) ++failures;
    }
    std::cout << "check: " << results.size() - failures << "/" << results.size()
              << " checks passed\n";
    return failures == 0 ? kExitOk : kExitConfig;
}

// ---- sweep ----------------------------------------------------------------------

namespace {

struct SweepAxis {
    std::string key;
    std::vector<std::string> values;
};

std::vector<SweepAxis> parse_grid_spec(const std::string& spec) {
    std::vector<SweepAxis> axes;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        auto next = spec.find(';', pos);
        std::string part = spec.substr(pos, next == std::string::npos ? next : next - pos);
        pos = next == std::string::npos ? spec.size() : next + 1;
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw ConfigError("sweep: grid axis '" + part + "' is not key=v1,v2,...");
        SweepAxis axis;
        axis.key = part.substr(0, eq);
        std::string vals = part.substr(eq + 1);
        std::size_t vpos = 0;
        while (vpos <= vals.size()) {
            auto comma = vals.find(',', vpos);
            std::string v =
                vals.substr(vpos, comma == std::string::npos ? comma : comma - vpos);
            if (v.empty()) throw ConfigError("sweep: empty value in axis '" + axis.key + "'");
            axis.values.push_back(v);
            if (comma == std::string::npos) break;
            vpos = comma + 1;
        }
        if (axis.values.empty())
            throw ConfigError("sweep: axis '" + axis.key + "' has no values");
        axes.push_back(std::move(axis));
    }
    if (axes.empty()) throw ConfigError("sweep: empty grid spec");
    return axes;
}

int sweep_threads() {
    if (const char* env = std::getenv("THETAFLOW_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int cmd_sweep(const RunConfig& base, const std::string& grid_spec) {
    base.validate();
    auto axes = parse_grid_spec(grid_spec);
    std::size_t cells = 1;
    for (const auto& a : axes) cells *= a.values.size();

    struct Cell {
        std::string label;
        RunConfig config;
        RunOutputs out;
    };
    std::vector<Cell> grid_cells(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        std::string overrides, label;
        std::size_t rem = cell;
        for (const auto& axis : axes) {
            const std::string& v = axis.values[rem % axis.values.size()];
            rem /= axis.values.size();
            overrides += axis.key + "=" + v + "\n";
            if (!label.empty()) label += ",";
            label += axis.key + "=" + v;
        }
        RunConfig c = parse_config_text(overrides, "sweep-cell", base);
        char idx[16];
        std::snprintf(idx, sizeof(idx), "%03zu", cell);
        c.outdir = base.outdir + "/cell_" + idx;
        grid_cells[cell] = {label, std::move(c), {}};
    }

    int pool = std::min<int>(sweep_threads(), static_cast<int>(cells));
    std::mutex fail_mutex;
    std::vector<std::string> errors;
    std::size_t next_cell = 0;
    std::mutex queue_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t mine;
            {
                std::lock_guard<std::mutex> lock(queue_mutex);
                if (next_cell >= grid_cells.size()) return;
                mine = next_cell++;
            }
            try {
                grid_cells[mine].out = run_pipeline(grid_cells[mine].config, /*quiet=*/true);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                errors.push_back(grid_cells[mine].label + ": " + e.what());
                grid_cells[mine].out.exit_code = kExitConfig;
                grid_cells[mine].out.reason = e.what();
            }
        }
    };
    std::vector<std::thread> threads;
    for (int i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();

    fs::create_directories(base.outdir);
    CsvWriter csv(base.outdir + "/summary.csv", "thetaflow-sweep-v1",
                  {"cell", "label", "E0", "max_E", "fitted_C", "exit_reason"});
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const auto& c = grid_cells[cell];
        csv.row({CsvWriter::field(static_cast<long>(cell)), c.label, f(c.out.E0),
                 f(c.out.max_E), f(c.out.fitted_C), c.out.reason});
    }
    std::cout << "sweep: " << cells << " cells, " << pool << " threads, summary in "
              << base.outdir << "/summary.csv\n";
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "sweep: " << e << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

int cmd_norms(const std::string& checkpoint_path, std::optional<double> s_opt, int j0) {
    auto [state, t] = checkpoint_load(checkpoint_path);
    FilterBank bank = build_filter_bank(state.grid(), j0);
    double n = state.grid()->dim();

    std::cout << "# schema: thetaflow-norms-v1\r\n";
    std::cout << "field,kind,j,s,value\r\n";
    auto block_rows = [&](const std::string& name, const SpectralField& z) {
        auto table = bank.block_l2_table(z);
        for (int j = bank.j_min(); j <= bank.j_max(); ++j)
            std::cout << name << ",block," << j << ","
                      << "," << f(table[static_cast<std::size_t>(j - bank.j_min())]) << "\r\n";
        std::vector<double> ss{0.5 * n - 1.0, 0.5 * n, 0.5 * n + 1.0};
        if (s_opt) ss.push_back(*s_opt);
        for (double s : ss)
            std::cout << name << ",besov,," << f(s) << "," << f(besov_norm(bank, z, s))
                      << "\r\n";
    };
    block_rows("a", state.a);
    block_rows("u", state.u);
    block_rows("b", state.b);
    std::cout << "state,theorem_norm,," << "," << f(theorem_norm(bank, state)) << "\r\n";
    std::cout << "state,time,," << "," << f(t) << "\r\n";
    return kExitOk;
}

int cmd_dump(const RunConfig& config) {
    std::cout << dump_config(config);
    return kExitOk;
}

}  // namespace thetaflow
