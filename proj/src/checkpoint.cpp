// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "thetaflow/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian; serialize explicitly on other platforms");

namespace thetaflow {

namespace {

constexpr char kMagic[4] = {'T', 'H', 'F', 'L'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const char* what) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IoError(std::string("checkpoint: truncated while reading ") + what);
    return v;
}

void put_field(std::ofstream& out, const SpectralField& f) {
    for (int c = 0; c < f.components(); ++c) {
        auto s = f.comp(c);
        out.write(reinterpret_cast<const char*>(s.data()),
                  static_cast<std::streamsize>(s.size() * sizeof(cplx)));
    }
}

void get_field(std::ifstream& in, SpectralField& f, const char* what) {
    for (int c = 0; c < f.components(); ++c) {
        auto s = f.comp(c);
        in.read(reinterpret_cast<char*>(s.data()),
                static_cast<std::streamsize>(s.size() * sizeof(cplx)));
        if (!in) throw IoError(std::string("checkpoint: truncated while reading ") + what);
    }
}

}  // namespace

void checkpoint_save(const PerturbationState& s, double t, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("checkpoint: cannot open " + path + " for writing");
    out.write(kMagic, 4);
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid()->dim()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.grid()->modes_per_axis()));
    put<double>(out, s.grid()->period_scale());
    put<double>(out, t);
    put_field(out, s.a);
    put_field(out, s.u);
    put_field(out, s.b);
    if (!out) throw IoError("checkpoint: write failed for " + path);
}

std::pair<PerturbationState, double> checkpoint_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("checkpoint: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError("checkpoint: bad magic in " + path);
    auto version = get<std::uint32_t>(in, "version");
    if (version != kVersion)
        throw IoError("checkpoint: unsupported version " + std::to_string(version));
    auto dim = get<std::uint32_t>(in, "dimension");
    auto N = get<std::uint32_t>(in, "grid size");
    auto L = get<double>(in, "period scale");
    auto t = get<double>(in, "time");
    auto grid = Grid::make(static_cast<int>(dim), static_cast<int>(N), L);
    PerturbationState s = PerturbationState::zero(grid);
    get_field(in, s.a, "a");
    get_field(in, s.u, "u");
    get_field(in, s.b, "b");
    // Trailing garbage means the file is not what we wrote.
    char extra;
    if (in.read(&extra, 1)) throw IoError("checkpoint: trailing bytes in " + path);
    return {std::move(s), t};
}

}  // namespace thetaflow
