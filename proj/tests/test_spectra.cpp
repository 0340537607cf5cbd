#include <doctest.h>

#include "capharm/error.hpp"
#include "capharm/random.hpp"
#include "capharm/spectra.hpp"
#include "capharm/surfgen.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace capharm;
using namespace capharm::spectra;
using std::numbers::pi;

namespace {

SchCoefficients random_coeffs(int k_max, std::uint64_t seed, double theta_c = pi / 6) {
    SchCoefficients q(theta_c, k_max);
    SplitMix64 rng(seed);
    for (Eigen::Index r = 0; r < q.q.rows(); ++r)
        for (int ch = 0; ch < 3; ++ch) q.q(r, ch) = {rng.normal(), rng.normal()};
    return q;
}

// Coefficients whose FDEC matrix is diag(a, b, c) with x/y/z rows.
SchCoefficients diagonal_fdec(double a, double b, double c) {
    SchCoefficients q(pi / 6, 2);
    const std::complex<double> i(0, 1);
    q.at(1, 1, 0) = -a / 2;
    q.at(-1, 1, 0) = a / 2;
    q.at(1, 1, 1) = -i * b / 2.0;
    q.at(-1, 1, 1) = -i * b / 2.0;
    q.at(0, 1, 2) = c / std::numbers::sqrt2;
    return q;
}

SchCoefficients rotate_channels(const SchCoefficients& q, const Eigen::Matrix3d& R) {
    SchCoefficients out = q;
    out.q = q.q * R.transpose().cast<std::complex<double>>();
    return out;
}

}  // namespace

TEST_CASE("FDEC of a diagonal construction") {
    const auto f = fdec(diagonal_fdec(2, 1, 0.5));
    CHECK(f.a == doctest::Approx(2).epsilon(1e-14));
    CHECK(f.b == doctest::Approx(1).epsilon(1e-14));
    CHECK(f.c == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.max_imag < 1e-14);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(std::abs(f.axes[j](j)) - 1.0) < 1e-12);
    CHECK(std::abs(f.axes[0].cross(f.axes[1]).dot(f.axes[2])) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(fdec(SchCoefficients(pi / 6, 3)), DegenerateFdec);
    CHECK_THROWS_AS(fdec(SchCoefficients(pi / 6, 0)), DegenerateFdec);
}

TEST_CASE("FDEC is invariant to rotating the channels") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        // Real-signal coefficients: q^-m = (-1)^m conj(q^m).
        SchCoefficients q(pi / 6, 3);
        for (int ch = 0; ch < 3; ++ch) {
            q.at(1, 1, ch) = {rng.normal(), rng.normal()};
            q.at(-1, 1, ch) = -std::conj(q.at(1, 1, ch));
            q.at(0, 1, ch) = rng.normal();
        }
        const Eigen::Quaterniond rot(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        const auto a = fdec(q), b = fdec(rotate_channels(q, rot.normalized().toRotationMatrix()));
        CHECK(std::abs(a.a - b.a) < 1e-10 * a.a);
        CHECK(std::abs(a.b - b.b) < 1e-10 * a.a);
        CHECK(std::abs(a.c - b.c) < 1e-10 * a.a);
        CHECK(a.a >= a.b);
        CHECK(a.b >= a.c);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(std::abs(a.axes[i].dot(a.axes[j]) - (i == j)) < 1e-10);
    }
}

TEST_CASE("descriptors") {
    SchCoefficients only1 = diagonal_fdec(1, 1, 1);
    const auto r1 = descriptors(only1);
    CHECK(r1.normalized[2] == 0.0);
    CHECK(r1.raw[1] > 0.0);

    const auto q = random_coeffs(8, 4);
    const auto r = descriptors(q);
    SchCoefficients scaled = q;
    scaled.q *= 7.5;
    const auto rs = descriptors(scaled);
    for (int k = 2; k <= 8; ++k) CHECK(rs.normalized[k] == doctest::Approx(r.normalized[k]).epsilon(1e-12));

    // Rotation about the cap axis multiplies q^m by exp(i m phi0).
    SchCoefficients turned = q;
    for (int k = 0; k <= 8; ++k)
        for (int m = -k; m <= k; ++m)
            for (int ch = 0; ch < 3; ++ch) turned.at(m, k, ch) *= std::polar(1.0, m * 0.83);
    const auto rt = descriptors(turned);
    for (int k = 0; k <= 8; ++k) CHECK(std::abs(rt.raw[k] - r.raw[k]) < 1e-12 * r.raw[k]);

    SchCoefficients no_breathing = q;
    no_breathing.q.row(0).setZero();
    const auto rb = descriptors(no_breathing);
    for (int k = 2; k <= 8; ++k) CHECK(std::abs(rb.normalized[k] - r.normalized[k]) < 1e-10 * r.normalized[k]);

    for (int k = 0; k <= 8; ++k) {
        CHECK(r.raw[k] >= 0.0);
        CHECK(r.raw[k] == doctest::Approx(r.raw_channel[k][0] + r.raw_channel[k][1] + r.raw_channel[k][2]));
    }
    CHECK_THROWS_AS(descriptors(SchCoefficients(pi / 6, 4)), DegenerateFdec);
    CHECK_THROWS_AS(descriptors(random_coeffs(1, 1)), InsufficientPoints);
}

TEST_CASE("Hurst fit") {
    std::vector<double> d(26, 0.0);
    for (int k = 2; k <= 25; ++k) d[k] = 3.0 * std::pow(k, -1.2);
    const auto h = fit_hurst(d, 2, 25);
    CHECK(h.hurst == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(h.fd == doctest::Approx(2.4).epsilon(1e-12));
    CHECK(h.a_fit == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(h.hurst + h.fd == 3.0);
    CHECK_FALSE(h.non_fractal);

    std::vector<double> steep(10, 0.0);
    for (int k = 2; k < 10; ++k) steep[k] = std::pow(k, -3.0);
    CHECK(fit_hurst(steep, 2, 9).non_fractal);

    CHECK_THROWS_AS(fit_hurst(d, 1, 25), WindowOutOfRange);
    CHECK_THROWS_AS(fit_hurst(d, 2, 26), WindowOutOfRange);
    CHECK_THROWS_AS(fit_hurst(d, 5, 6), InsufficientPoints);
    std::vector<double> zeros(10, 0.0);
    CHECK_THROWS_AS(fit_hurst(zeros, 2, 9), InsufficientPoints);

    auto rep = descriptors(random_coeffs(10, 2));
    for (auto ch : {HurstChannel::Z, HurstChannel::Total}) {
        fit_hurst(rep, 2, 10, ch);
        CHECK(rep.fd == 3.0 - rep.hurst);
        CHECK(rep.fitted);
    }
    CHECK(parse_hurst_channel("z") == HurstChannel::Z);
    CHECK_THROWS_AS(parse_hurst_channel("x"), ConfigError);
}

TEST_CASE("wavelengths") {
    Fdec f;
    f.a = 24.7879;
    f.b = 23.3502;
    const auto w = wavelengths(f, 40);
    CHECK(std::abs(fdec_circumference(f) - 151.2980) < 5e-4);
    CHECK(std::abs(w[2] - 75.6490) < 5e-4);
    CHECK(std::abs(w[10] - 15.12) < 0.01);
    // The formula gives C / 40 here; the quoted 1.9908 mm does not follow from it.
    CHECK(std::abs(w[40] - 151.2980 / 40) < 5e-4);
    for (int k = 1; k <= 40; ++k) CHECK(std::abs(w[k] * k - w[1]) < 1e-12 * w[1]);

    f.a = f.b = 2.0;
    const auto c = wavelengths(f, 5);
    for (int k = 1; k <= 5; ++k) CHECK(c[k] == doctest::Approx(2 * pi * 2.0 / k).epsilon(1e-15));

    // On the hemisphere the degrees are integers, so k_max comes back as L.
    for (int L : {5, 12, 40}) CHECK(asymptotic_kmax(pi / 2, 1.3, 2 * pi * 1.3 / L) == doctest::Approx(L).epsilon(1e-12));
    CHECK(asymptotic_degree(pi / 18, 20) == doctest::Approx(9 * 20.5 - 0.5).epsilon(1e-14));
}

TEST_CASE("windows and band mass") {
    const auto q = random_coeffs(12, 6);
    const SpectralWindow w{3, 7};
    const auto once = apply_window(q, w);
    const auto twice = apply_window(once, w);
    CHECK(once.q == twice.q);
    const auto bm = band_mass(once, w);
    CHECK(bm.out_band == 0.0);
    CHECK(bm.in_band > 0.0);
    const auto full = band_mass(q, w);
    CHECK(full.in_band == doctest::Approx(bm.in_band).epsilon(1e-15));
    CHECK_THROWS_AS(check_window({0, 3}, 12), WindowOutOfRange);
    CHECK_THROWS_AS(check_window({4, 3}, 12), WindowOutOfRange);
    CHECK_THROWS_AS(check_window({4, 13}, 12), WindowOutOfRange);
}

TEST_CASE("roughness projection") {
    const double tc = pi / 6;
    const int K = 6;
    const auto eig = eigensolve::get_eigentable(tc, eigensolve::Parity::Even, K);
    const auto dome = harmonics::make_dome(tc, 24);
    capmap::CapParam cap;
    cap.theta_c = tc;
    cap.theta = dome.theta;
    cap.phi = dome.phi;
    auto src = random_coeffs(K, 21, tc);
    src.centroid = Vec3(5, 5, 5);

    SUBCASE("full band in full-3d mode adds the series without the centroid") {
        const auto out = project_roughness(src, {1, K}, dome.mesh, cap, eig, ProjectionMode::Full3d);
        const auto series = harmonics::reconstruct(src, eig, cap, 1, K, false);
        for (std::size_t i = 0; i < out.vertices.size(); ++i)
            CHECK((out.vertices[i] - dome.mesh.vertices[i] - series[i]).norm() < 1e-12);
        CHECK(out.faces == dome.mesh.faces);
    }
    SUBCASE("a window over zeroed rows leaves the donor alone") {
        SchCoefficients hole = src;
        for (int m = -3; m <= 3; ++m)
            for (int ch = 0; ch < 3; ++ch) hole.at(m, 3, ch) = 0.0;
        for (auto mode : {ProjectionMode::ZOnly, ProjectionMode::Full3d}) {
            const auto out = project_roughness(hole, {3, 3}, dome.mesh, cap, eig, mode);
            for (std::size_t i = 0; i < out.vertices.size(); ++i) CHECK(out.vertices[i] == dome.mesh.vertices[i]);
        }
    }
    SUBCASE("z-only moves vertices along the donor normals") {
        const auto out = project_roughness(src, {2, 4}, dome.mesh, cap, eig, ProjectionMode::ZOnly);
        const auto normals = meshkit::vertex_normals(dome.mesh);
        const auto series = harmonics::reconstruct(src, eig, cap, 2, 4, false);
        for (std::size_t i = 0; i < out.vertices.size(); ++i) {
            const Vec3 d = out.vertices[i] - dome.mesh.vertices[i];
            CHECK((d - series[i].z() * normals[i]).norm() < 1e-12);
        }
    }
    SUBCASE("errors") {
        SchCoefficients other = src;
        other.theta_c = pi / 5;
        CHECK_THROWS_AS(project_roughness(other, {1, 2}, dome.mesh, cap, eig), ThetaCMismatch);
        CHECK_THROWS_AS(project_roughness(src, {1, K + 1}, dome.mesh, cap, eig), WindowOutOfRange);
        CHECK_THROWS_AS(parse_projection_mode("sideways"), ConfigError);
    }
}

TEST_CASE("spectrum table") {
    auto rep = descriptors(random_coeffs(4, 3));
    fit_hurst(rep, 2, 4);
    const auto text = report_tsv(rep);
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    CHECK(line == "k\tDhat2\tD2\tD2_z\tomega");
    int rows = 0;
    while (std::getline(is, line) && line[0] != '#') ++rows;
    CHECK(rows == 5);
    CHECK(text.find("# H\t") != std::string::npos);
    CHECK(text.find("# FD\t") != std::string::npos);
}
