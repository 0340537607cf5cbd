#include "capharm/surfgen.hpp"
#include "capharm/diskgrid.hpp"
#include "capharm/error.hpp"
#include "capharm/random.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace capharm::surfgen {

namespace {

using cd = std::complex<double>;

void check_spec(const FractalSpec& s) {
    if (!(s.hurst > 0.0 && s.hurst < 1.0)) throw DomainError("fractal: Hurst exponent must lie in (0, 1)");
    if (!(s.rms > 0.0) || !(s.radius > 0.0)) throw DomainError("fractal: rms and radius must be positive");
    if (s.resolution < 32) throw DomainError("fractal: resolution must be at least 32");
}

// Frequency index for DFT slot i of an n-point transform.
int freq(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }

// In-place inverse DFT along rows of an n x n row-major array, using a table
// of the n roots of unity.
void idft_rows(std::vector<cd>& a, int n, const std::vector<cd>& roots) {
    std::vector<cd> tmp(n);
    for (int r = 0; r < n; ++r) {
        cd* row = a.data() + static_cast<std::size_t>(r) * n;
        for (int x = 0; x < n; ++x) {
            cd s = 0.0;
            for (int k = 0; k < n; ++k) s += row[k] * roots[(static_cast<long>(k) * x) % n];
            tmp[x] = s;
        }
        std::copy(tmp.begin(), tmp.end(), row);
    }
}

void transpose(std::vector<cd>& a, int n) {
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) std::swap(a[static_cast<std::size_t>(i) * n + j], a[static_cast<std::size_t>(j) * n + i]);
}

TriMesh grid_mesh(int p) {
    const auto g = diskgrid::disk_grid(p);
    TriMesh m;
    m.vertices.reserve(g.points.size());
    for (const auto& q : g.points) m.vertices.emplace_back(q.x(), q.y(), 0.0);
    m.faces = g.faces;
    return m;
}

}  // namespace

std::vector<double> fractal_height_field(const FractalSpec& spec) {
    check_spec(spec);
    const int n = spec.resolution;
    SplitMix64 rng(spec.seed);
    std::vector<cd> a(static_cast<std::size_t>(n) * n);
    // Noise is drawn in a fixed row-major order so the field depends on the seed only.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = rng.normal(), im = rng.normal();
            const double q = std::hypot(freq(i, n), freq(j, n));
            a[static_cast<std::size_t>(i) * n + j] = q == 0.0 ? cd(0.0) : cd(re, im) * std::pow(q, -(1.0 + spec.hurst));
        }
    std::vector<cd> roots(n);
    for (int k = 0; k < n; ++k) roots[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
    idft_rows(a, n, roots);
    transpose(a, n);
    idft_rows(a, n, roots);
    transpose(a, n);
    std::vector<double> h(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) h[i] = a[i].real();
    return h;
}

TriMesh gen_fractal_disk(const FractalSpec& spec) {
    const auto field = fractal_height_field(spec);
    const int n = spec.resolution;
    TriMesh m = grid_mesh(n);
    // Bilinear sample of the periodic field; square [-1, 1]^2 spans n cells.
    auto sample = [&](double x, double y) {
        const double u = (x + 1.0) * 0.5 * n, v = (y + 1.0) * 0.5 * n;
        const double fu = std::floor(u), fv = std::floor(v);
        const double tu = u - fu, tv = v - fv;
        auto at = [&](long i, long j) {
            i = ((i % n) + n) % n;
            j = ((j % n) + n) % n;
            return field[static_cast<std::size_t>(i) * n + j];
        };
        const long i0 = static_cast<long>(fv), j0 = static_cast<long>(fu);
        return (1 - tv) * ((1 - tu) * at(i0, j0) + tu * at(i0, j0 + 1)) +
               tv * ((1 - tu) * at(i0 + 1, j0) + tu * at(i0 + 1, j0 + 1));
    };
    double mean = 0.0;
    for (auto& v : m.vertices) {
        v.z() = sample(v.x(), v.y());
        mean += v.z();
    }
    mean /= static_cast<double>(m.vertices.size());
    double ss = 0.0;
    for (auto& v : m.vertices) {
        v.z() -= mean;
        ss += v.z() * v.z();
    }
    const double scale = spec.rms / std::sqrt(ss / static_cast<double>(m.vertices.size()));
    for (auto& v : m.vertices) {
        v.x() *= spec.radius;
        v.y() *= spec.radius;
        v.z() *= scale;
    }
    return m;
}

PatchKind parse_patch_kind(const std::string& name) {
    if (name == "plane-disk") return PatchKind::PlaneDisk;
    if (name == "paraboloid-cap") return PatchKind::ParaboloidCap;
    if (name == "sphere-cap") return PatchKind::SphereCap;
    if (name == "ellipsoid-cap") return PatchKind::EllipsoidCap;
    throw ConfigError("unknown patch kind '" + name + "'");
}

std::string to_string(PatchKind kind) {
    switch (kind) {
        case PatchKind::PlaneDisk: return "plane-disk";
        case PatchKind::ParaboloidCap: return "paraboloid-cap";
        case PatchKind::SphereCap: return "sphere-cap";
        case PatchKind::EllipsoidCap: return "ellipsoid-cap";
    }
    return "?";
}

TriMesh gen_analytic_patch(PatchKind kind, const PatchParams& p) {
    if (p.resolution < 3) throw DomainError("analytic patch: resolution must be at least 3");
    TriMesh m = grid_mesh(p.resolution);
    switch (kind) {
        case PatchKind::PlaneDisk:
        case PatchKind::ParaboloidCap: {
            if (!(p.radius > 0.0)) throw DomainError("analytic patch: radius must be positive");
            for (auto& v : m.vertices) {
                const double rho2 = v.x() * v.x() + v.y() * v.y();
                v.x() *= p.radius;
                v.y() *= p.radius;
                v.z() = kind == PatchKind::PlaneDisk ? 0.0 : p.depth * (1.0 - rho2);
            }
            break;
        }
        case PatchKind::SphereCap:
        case PatchKind::EllipsoidCap: {
            if (!(p.theta_c > 0.0 && p.theta_c < std::numbers::pi))
                throw DomainError("analytic patch: theta_c must lie in (0, pi)");
            if (kind == PatchKind::EllipsoidCap && !(p.a > 0.0 && p.b > 0.0 && p.c > 0.0))
                throw DomainError("analytic patch: ellipsoid semi-axes must be positive");
            // Equal-area lift: a disk of radius rho maps to the cap of area pi rho^2.
            const double rl = std::sqrt(2.0 * (1.0 - std::cos(p.theta_c)));
            for (auto& v : m.vertices) {
                const double x = rl * v.x(), y = rl * v.y();
                const double s2 = x * x + y * y;
                const double f = std::sqrt(std::max(0.0, 1.0 - 0.25 * s2));
                Eigen::Vector3d q(f * x, f * y, 1.0 - 0.5 * s2);
                if (kind == PatchKind::EllipsoidCap) q = Eigen::Vector3d(p.a * q.x(), p.b * q.y(), p.c * q.z());
                v = q;
            }
            break;
        }
    }
    return m;
}

}  // namespace capharm::surfgen
