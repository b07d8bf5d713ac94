// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "thetaflow/errors.hpp"

namespace thetaflow {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& name, int line, const std::string& v) {
    double out;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(name, line, "expected a number, got '" + v + "'");
    return out;
}

long parse_int(const std::string& name, int line, const std::string& v) {
    long out;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(name, line, "expected an integer, got '" + v + "'");
    return out;
}

std::string fmt_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::IFRK4: return "ifrk4";
        case Scheme::IFRK2: return "ifrk2";
        case Scheme::RK4: return "rk4";
    }
    return "ifrk4";
}

}  // namespace

void RunConfig::validate() const {
    if (n != 2 && n != 3) throw ConfigError("config: n must be 2 or 3");
    if (N < 8 || N % 2 != 0) throw ConfigError("config: N must be even and >= 8");
    if (!(L > 0.0)) throw ConfigError("config: L must be positive");
    params.validate(n);
    integrator.validate();
    if (amplitude < 0.0) throw ConfigError("config: amplitude must be nonnegative");
    if (j_hi < j_lo) throw ConfigError("config: band requires j_lo <= j_hi");
    if (kind != "random-band" && kind != "taylor-green" && kind != "single-mode" &&
        kind != "checkpoint")
        throw ConfigError("config: unknown initial-data kind '" + kind + "'");
    if (kind == "checkpoint" && checkpoint.empty())
        throw ConfigError("config: kind=checkpoint requires checkpoint=<path>");
}

RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const RunConfig& base) {
    RunConfig c = base;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) fail(name, lineno, "expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(name, lineno, "empty key");
        if (!seen.insert(key).second) fail(name, lineno, "duplicate key '" + key + "'");

        if (key == "n") c.n = static_cast<int>(parse_int(name, lineno, value));
        else if (key == "N") c.N = static_cast<int>(parse_int(name, lineno, value));
        else if (key == "L") c.L = parse_double(name, lineno, value);
        else if (key == "mu") c.params.mu = parse_double(name, lineno, value);
        else if (key == "lambda") c.params.lambda = parse_double(name, lineno, value);
        else if (key == "gamma") c.params.gamma = parse_double(name, lineno, value);
        else if (key == "A") c.params.A = parse_double(name, lineno, value);
        else if (key == "j0") c.j0 = static_cast<int>(parse_int(name, lineno, value));
        else if (key == "dt") c.integrator.dt = parse_double(name, lineno, value);
        else if (key == "T") c.integrator.T = parse_double(name, lineno, value);
        else if (key == "cfl_safety") c.integrator.cfl_safety = parse_double(name, lineno, value);
        else if (key == "snapshot_interval")
            c.integrator.snapshot_interval = static_cast<int>(parse_int(name, lineno, value));
        else if (key == "floor") c.integrator.floor = parse_double(name, lineno, value);
        else if (key == "blowup_norm") c.integrator.blowup_norm = parse_double(name, lineno, value);
        else if (key == "scheme") {
            if (value == "ifrk4") c.integrator.scheme = Scheme::IFRK4;
            else if (value == "ifrk2") c.integrator.scheme = Scheme::IFRK2;
            else if (value == "rk4") c.integrator.scheme = Scheme::RK4;
            else fail(name, lineno, "unknown scheme '" + value + "'");
        } else if (key == "kind") c.kind = value;
        else if (key == "amplitude") c.amplitude = parse_double(name, lineno, value);
        else if (key == "j_lo") c.j_lo = static_cast<int>(parse_int(name, lineno, value));
        else if (key == "j_hi") c.j_hi = static_cast<int>(parse_int(name, lineno, value));
        else if (key == "seed")
            c.seed = static_cast<unsigned long>(parse_int(name, lineno, value));
        else if (key == "checkpoint") c.checkpoint = value;
        else if (key == "outdir") c.outdir = value;
        else fail(name, lineno, "unknown key '" + key + "'");
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
    }
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string dump_config(const RunConfig& c) {
    std::ostringstream out;
    out << "n=" << c.n << "\n";
    out << "N=" << c.N << "\n";
    out << "L=" << fmt_double(c.L) << "\n";
    out << "mu=" << fmt_double(c.params.mu) << "\n";
    out << "lambda=" << fmt_double(c.params.lambda) << "\n";
    out << "gamma=" << fmt_double(c.params.gamma) << "\n";
    out << "A=" << fmt_double(c.params.A) << "\n";
    out << "j0=" << c.j0 << "\n";
    out << "dt=" << fmt_double(c.integrator.dt) << "\n";
    out << "T=" << fmt_double(c.integrator.T) << "\n";
    out << "cfl_safety=" << fmt_double(c.integrator.cfl_safety) << "\n";
    out << "scheme=" << scheme_name(c.integrator.scheme) << "\n";
    out << "snapshot_interval=" << c.integrator.snapshot_interval << "\n";
    out << "floor=" << fmt_double(c.integrator.floor) << "\n";
    out << "blowup_norm=" << fmt_double(c.integrator.blowup_norm) << "\n";
    out << "kind=" << c.kind << "\n";
    out << "amplitude=" << fmt_double(c.amplitude) << "\n";
    out << "j_lo=" << c.j_lo << "\n";
    out << "j_hi=" << c.j_hi << "\n";
    out << "seed=" << c.seed << "\n";
    out << "checkpoint=" << c.checkpoint << "\n";
    out << "outdir=" << c.outdir << "\n";
    return out.str();
}

}  // namespace thetaflow
