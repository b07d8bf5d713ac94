// Copyright (c) 2026 thetaflow contributors
// SPDX-License-Identifier: Apache-2.0

#include "thetaflow/ops.hpp"

#include <algorithm>
#include <cmath>

#include "thetaflow/errors.hpp"
#include "thetaflow/fft.hpp"

namespace thetaflow {

namespace {

// Mean small enough to count as zero for the homogeneous-symbol operators.
void require_zero_mean(const SpectralField& f, const char* op) {
    double scale = std::max(1.0, f.l2_norm());
    for (int c = 0; c < f.components(); ++c)
        if (std::abs(f.mean(c)) > 1e-12 * scale)
            throw PreconditionError(std::string(op) + ": field must be zero-mean");
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis) {
    const auto& g = *f.grid();
    if (axis < 0 || axis >= g.dim()) throw PreconditionError("derivative: axis out of range");
    SpectralField out = f;
    for (int c = 0; c < f.components(); ++c) {
        auto s = out.comp(c);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] *= cplx(0.0, g.deriv_wavenumber(i, axis));
    }
    return out;
}

SpectralField gradient(const SpectralField& f) {
    const auto& g = *f.grid();
    if (f.components() != 1) throw PreconditionError("gradient: scalar input required");
    SpectralField out = SpectralField::vector(f.grid());
    auto in = f.comp(0);
    for (int d = 0; d < g.dim(); ++d) {
        auto s = out.comp(d);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = in[i] * cplx(0.0, g.deriv_wavenumber(i, d));
    }
    return out;
}

SpectralField divergence(const SpectralField& u) {
    const auto& g = *u.grid();
    if (u.components() != g.dim()) throw PreconditionError("divergence: vector input required");
    SpectralField out = SpectralField::scalar(u.grid());
    auto s = out.comp(0);
    for (int d = 0; d < g.dim(); ++d) {
        auto in = u.comp(d);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += in[i] * cplx(0.0, g.deriv_wavenumber(i, d));
    }
    return out;
}

SpectralField fractional_laplacian(const SpectralField& f, double s) {
    const auto& g = *f.grid();
    if (s < 0.0) require_zero_mean(f, "fractional_laplacian");
    SpectralField out = f;
    const auto& mod = g.moduli();
    for (int c = 0; c < f.components(); ++c) {
        auto sp = out.comp(c);
        for (std::size_t i = 0; i < sp.size(); ++i) {
            if (mod[i] == 0.0) {
                if (s != 0.0) sp[i] = cplx(0.0, 0.0);
            } else {
                sp[i] *= std::pow(mod[i], s);
            }
        }
    }
    return out;
}

SpectralField inverse_laplacian(const SpectralField& f) {
    require_zero_mean(f, "inverse_laplacian");
    const auto& mod = f.grid()->moduli();
    SpectralField out = f;
    for (int c = 0; c < f.components(); ++c) {
        auto sp = out.comp(c);
        for (std::size_t i = 0; i < sp.size(); ++i)
            sp[i] = (mod[i] == 0.0) ? cplx(0.0, 0.0) : sp[i] * (-1.0 / (mod[i] * mod[i]));
    }
    return out;
}

HelmholtzParts helmholtz(const SpectralField& u) {
    const auto& g = *u.grid();
    if (u.components() != g.dim()) throw PreconditionError("helmholtz: vector input required");
    HelmholtzParts parts{u, SpectralField::vector(u.grid())};
    int n = g.dim();
    for (std::size_t i = 0; i < g.size(); ++i) {
        // Normalize by the effective |k|^2 of the derivative wavenumbers so
        // P and Q stay exact projectors on every mode, Nyquist plane
        // included; modes with no usable derivative direction (zero mode,
        // pure Nyquist) belong to Pu.
        double k2 = 0.0;
        cplx kdotu(0.0, 0.0);
        for (int d = 0; d < n; ++d) {
            double kd = g.deriv_wavenumber(i, d);
            k2 += kd * kd;
            kdotu += kd * u.at(d, i);
        }
        if (k2 == 0.0) continue;
        for (int d = 0; d < n; ++d) {
            cplx q = g.deriv_wavenumber(i, d) * kdotu / k2;
            parts.q.at(d, i) = q;
            parts.p.at(d, i) -= q;
        }
    }
    return parts;
}

SpectralField leray_project(const SpectralField& u) { return helmholtz(u).p; }
SpectralField gradient_project(const SpectralField& u) { return helmholtz(u).q; }

SpectralField lame_operator(const SpectralField& u, double mu, double lambda) {
    const auto& g = *u.grid();
    if (u.components() != g.dim()) throw PreconditionError("lame_operator: vector input required");
    if (!(mu > 0.0) || !(g.dim() * lambda + 2.0 * mu > 0.0))
        throw ConfigError("lame_operator: viscosities violate mu>0, n*lambda+2*mu>0");
    SpectralField out = SpectralField::vector(u.grid());
    int n = g.dim();
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.modulus(i);
        cplx kdotu(0.0, 0.0);
        for (int d = 0; d < n; ++d) kdotu += g.deriv_wavenumber(i, d) * u.at(d, i);
        for (int d = 0; d < n; ++d)
            out.at(d, i) =
                -mu * r * r * u.at(d, i) - (lambda + mu) * g.deriv_wavenumber(i, d) * kdotu;
    }
    return out;
}

void dealias_inplace(SpectralField& f) {
    const auto& g = *f.grid();
    for (int c = 0; c < f.components(); ++c) {
        auto s = f.comp(c);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (!g.dealias_keep(i)) s[i] = cplx(0.0, 0.0);
    }
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out = f;
    dealias_inplace(out);
    return out;
}

std::vector<double> physical(const SpectralField& f, int c) {
    return f.grid()->fft().to_physical(f.comp(c));
}

SpectralField from_physical(const GridPtr& grid, std::span<const double> values) {
    SpectralField out = SpectralField::scalar(grid);
    grid->fft().from_physical(values, out.comp(0));
    return out;
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
    if (f.components() != 1 || g.components() != 1)
        throw PreconditionError("multiply: scalar inputs required");
    auto a = physical(f);
    auto b = physical(g);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    SpectralField out = from_physical(f.grid(), a);
    dealias_inplace(out);
    return out;
}

SpectralField map_physical(const SpectralField& f, const std::function<double(double)>& fn) {
    if (f.components() != 1) throw PreconditionError("map_physical: scalar input required");
    auto a = physical(f);
    for (auto& v : a) v = fn(v);
    return from_physical(f.grid(), a);
}

double min_physical(const SpectralField& f) {
    auto a = physical(f);
    return *std::min_element(a.begin(), a.end());
}

double max_abs_physical(const SpectralField& f) {
    double m = 0.0;
    if (f.components() == 1) {
        for (double v : physical(f)) m = std::max(m, std::abs(v));
        return m;
    }
    // vector magnitude
    std::vector<std::vector<double>> comps;
    comps.reserve(f.components());
    for (int c = 0; c < f.components(); ++c) comps.push_back(physical(f, c));
    for (std::size_t i = 0; i < comps[0].size(); ++i) {
        double s = 0.0;
        for (const auto& vc : comps) s += vc[i] * vc[i];
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

double l2_norm_physical(const SpectralField& f) {
    const auto& g = *f.grid();
    double s = 0.0;
    for (int c = 0; c < f.components(); ++c)
        for (double v : physical(f, c)) s += v * v;
    return std::sqrt(g.box_volume() * s / static_cast<double>(g.size()));
}

}  // namespace thetaflow
