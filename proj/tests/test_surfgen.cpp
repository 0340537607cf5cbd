#include <doctest.h>

#include "capharm/error.hpp"
#include "capharm/spectra.hpp"
#include "capharm/surfgen.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace capharm;
using namespace capharm::surfgen;
using std::numbers::pi;

namespace {

// Power above and below a radial frequency cut, by a direct 2D DFT of the field.
double band_ratio(const std::vector<double>& h, int n, double cut) {
    double lo = 0, hi = 0;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            const int fu = u < n / 2 ? u : u - n, fv = v < n / 2 ? v : v - n;
            const double q = std::hypot(fu, fv);
            if (q == 0) continue;
            std::complex<double> s = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += h[i * n + j] * std::polar(1.0, -2 * pi * (fu * i + fv * j) / n);
            (q < cut ? lo : hi) += std::norm(s);
        }
    return hi / lo;
}

}  // namespace

TEST_CASE("fractal disks are deterministic per seed") {
    FractalSpec s;
    s.resolution = 48;
    const auto a = gen_fractal_disk(s), b = gen_fractal_disk(s);
    CHECK(a.vertices == b.vertices);
    CHECK(a.faces == b.faces);
    s.seed = 11;
    CHECK(gen_fractal_disk(s).vertices != a.vertices);
}

TEST_CASE("fractal disk geometry") {
    FractalSpec s;
    s.resolution = 64;
    s.radius = 2.5;
    s.rms = 0.02;
    const auto m = gen_fractal_disk(s);
    CHECK(m.vertices.size() == 64u * 64u);
    CHECK(meshkit::validate_patch(m).is_valid_patch());
    double mean = 0, ss = 0, rmax = 0;
    for (const auto& v : m.vertices) {
        mean += v.z();
        ss += v.z() * v.z();
        rmax = std::max(rmax, v.head<2>().norm());
    }
    mean /= m.vertices.size();
    CHECK(std::abs(mean) < 1e-15);
    CHECK(std::sqrt(ss / m.vertices.size()) == doctest::Approx(0.02).epsilon(1e-6));
    CHECK(rmax == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("rougher surfaces carry more high-frequency power") {
    FractalSpec rough, smooth;
    rough.resolution = smooth.resolution = 32;
    rough.hurst = 0.3;
    smooth.hurst = 0.9;
    const double r = band_ratio(fractal_height_field(rough), 32, 4.0);
    const double q = band_ratio(fractal_height_field(smooth), 32, 4.0);
    CHECK(r > q);
}

TEST_CASE("fractal spec validation") {
    FractalSpec s;
    s.hurst = 1.0;
    CHECK_THROWS_AS(gen_fractal_disk(s), DomainError);
    s.hurst = 0.5;
    s.resolution = 16;
    CHECK_THROWS_AS(gen_fractal_disk(s), DomainError);
    s.resolution = 32;
    s.rms = 0;
    CHECK_THROWS_AS(gen_fractal_disk(s), DomainError);
}

TEST_CASE("analytic patches") {
    PatchParams p;
    SUBCASE("plane disk") {
        const auto m = gen_analytic_patch(PatchKind::PlaneDisk, p);
        for (const auto& v : m.vertices) {
            CHECK(v.z() == 0.0);
            CHECK(v.head<2>().norm() <= 1.0 + 1e-12);
        }
    }
    SUBCASE("sphere cap") {
        p.theta_c = pi / 3;
        const auto m = gen_analytic_patch(PatchKind::SphereCap, p);
        double zmin = 2;
        for (const auto& v : m.vertices) {
            CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
            zmin = std::min(zmin, v.z());
        }
        CHECK(zmin == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(meshkit::validate_patch(m).is_valid_patch());
    }
    SUBCASE("paraboloid") {
        p.depth = 0.3;
        const auto m = gen_analytic_patch(PatchKind::ParaboloidCap, p);
        double zmax = -1;
        for (const auto& v : m.vertices) {
            CHECK(v.z() == doctest::Approx(0.3 * (1 - v.head<2>().squaredNorm())).epsilon(1e-12));
            zmax = std::max(zmax, v.z());
        }
        CHECK(zmax <= 0.3);
    }
    SUBCASE("ellipsoid cap") {
        p.a = 2, p.b = 1.5, p.c = 0.5;
        const auto m = gen_analytic_patch(PatchKind::EllipsoidCap, p);
        for (const auto& v : m.vertices) {
            const double r = std::pow(v.x() / 2, 2) + std::pow(v.y() / 1.5, 2) + std::pow(v.z() / 0.5, 2);
            CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK(parse_patch_kind(to_string(PatchKind::EllipsoidCap)) == PatchKind::EllipsoidCap);
    CHECK_THROWS_AS(parse_patch_kind("torus"), ConfigError);
    p.theta_c = 0;
    CHECK_THROWS_AS(gen_analytic_patch(PatchKind::SphereCap, p), DomainError);
}

// The first-degree content of a conformally flattened patch measures its
// size, not the semi-axes of the source ellipsoid: see the README. What the
// pipeline does guarantee is that the FDEC scales with the patch.
TEST_CASE("FDEC of ellipsoid caps scales with the patch") {
    const int K = 3;
    std::vector<spectra::Fdec> out;
    double theta_c = 0;
    for (double s : {0.5, 1.0, 2.0}) {
        PatchParams p;
        p.resolution = 20;
        p.a = 2 * s, p.b = 1.5 * s, p.c = s;
        const auto mesh = gen_analytic_patch(PatchKind::EllipsoidCap, p);
        if (theta_c == 0) theta_c = capmap::optimize_theta_c(mesh, pi / 18, pi / 2).theta_c;
        const auto eig = eigensolve::get_eigentable(theta_c, eigensolve::Parity::Even, K);
        const auto cap = capmap::parameterize_to_cap(mesh, theta_c).cap;
        const auto fr = harmonics::fit_coefficients(mesh, cap, eig, K);
        out.push_back(spectra::fdec(fr.coeffs));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double s = i == 0 ? 0.5 : (i == 1 ? 1.0 : 2.0);
        CHECK(out[i].a == doctest::Approx(out[1].a * s).epsilon(1e-3));
        CHECK(out[i].b == doctest::Approx(out[1].b * s).epsilon(1e-3));
        // The even set has no (m = 0, k = 1) function, so the third axis is empty.
        CHECK(out[i].c < 1e-9 * out[i].a);
    }
}
