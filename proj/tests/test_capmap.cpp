#include <doctest.h>

#include "capharm/capmap.hpp"
#include "capharm/diskgrid.hpp"
#include "capharm/error.hpp"
#include "capharm/random.hpp"
#include "capharm/surfgen.hpp"

#include <cmath>
#include <numbers>

using namespace capharm;
using namespace capharm::capmap;
using std::numbers::pi;

namespace {

TriMesh sphere_cap(double theta_c, int res = 24) {
    surfgen::PatchParams p;
    p.theta_c = theta_c;
    p.resolution = res;
    return surfgen::gen_analytic_patch(surfgen::PatchKind::SphereCap, p);
}

TriMesh plane_disk(int res = 24) {
    surfgen::PatchParams p;
    p.resolution = res;
    return surfgen::gen_analytic_patch(surfgen::PatchKind::PlaneDisk, p);
}

TriMesh tetrahedron() {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.faces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
    return m;
}

double max_theta(const CapParam& c) { return *std::max_element(c.theta.begin(), c.theta.end()); }

}  // namespace

TEST_CASE("stereographic projection") {
    CHECK(stereographic(Vec3(0, 0, 1)).norm() == doctest::Approx(0.0));
    CHECK(cap_disk_radius(pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cap_disk_radius(40.0 * pi / 180.0) == doctest::Approx(0.3640).epsilon(1e-4));
    CHECK(cap_disk_radius(120.0 * pi / 180.0) == doctest::Approx(1.7321).epsilon(1e-4));

    // The rim of the cap lands on the circle of radius tan(theta_c / 2).
    const double tc = 40.0 * pi / 180.0;
    const Vec3 rim(std::sin(tc), 0.0, std::cos(tc));
    CHECK(stereographic(rim).norm() == doctest::Approx(cap_disk_radius(tc)).epsilon(1e-14));

    SplitMix64 rng(4);
    for (int i = 0; i < 200; ++i) {
        const Vec2 q(rng.uniform(-3, 3), rng.uniform(-3, 3));
        const Vec3 p = inv_stereographic(q);
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((stereographic(p) - q).norm() < 1e-12 * (1 + q.norm()));
    }
    CHECK_THROWS_AS(stereographic(Vec3(0, 0, -1)), DomainError);
}

TEST_CASE("Möbius disk automorphism") {
    const double r = cap_disk_radius(pi / 3);
    SplitMix64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        MobiusCoeff c{rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)};
        REQUIRE(c.valid());
        for (int i = 0; i < 16; ++i) {
            const double t = 2 * pi * i / 16;
            const std::complex<double> w = std::polar(1.0, t);
            CHECK(std::abs(mobius(c, r, w)) == doctest::Approx(r).epsilon(1e-10));
            const std::complex<double> z(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7));
            CHECK(std::abs(mobius_inverse(c, r, mobius(c, r, z)) - z) < 1e-10);
        }
    }
    // A = B = 0 is a pure scaling by r.
    DiskParam d;
    d.uv = {Vec2(0.3, -0.2), Vec2(1, 0), Vec2(0, 0)};
    const auto h = mobius_apply({}, pi / 3, d);
    for (std::size_t i = 0; i < d.uv.size(); ++i) CHECK((h[i] - r * d.uv[i]).norm() < 1e-15);
}

TEST_CASE("disk conformal map") {
    SUBCASE("flat disk is mapped to itself up to rotation") {
        const auto mesh = plane_disk();
        const auto d = disk_conformal_map(mesh);
        CHECK(d.method == "cotangent");
        CHECK(count_folds(mesh, d.uv) == 0);
        for (int v : meshkit::boundary_loop(mesh)) CHECK(d.uv[v].norm() == doctest::Approx(1.0).epsilon(1e-12));
        // Radii are preserved for a disk-shaped planar input.
        double worst = 0;
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
            worst = std::max(worst, std::abs(d.uv[i].norm() - mesh.vertices[i].head<2>().norm()));
        CHECK(worst < 0.02);
        const auto cap = cap_from_disk(mesh, d, {}, pi / 18);
        CHECK(distortion(mesh, cap).d_angle < 1e-3);
    }
    SUBCASE("sphere cap maps without folds") {
        const auto mesh = sphere_cap(pi / 3);
        const auto d = disk_conformal_map(mesh);
        CHECK(count_folds(mesh, d.uv) == 0);
    }
    SUBCASE("topology errors") {
        CHECK_THROWS_AS(disk_conformal_map(tetrahedron()), TopologyError);
        // Annulus: remove the centre triangles of a disk grid.
        auto mesh = plane_disk(12);
        std::vector<meshkit::Face> kept;
        for (const auto& f : mesh.faces) {
            Vec3 c = (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
            if (c.head<2>().norm() > 0.3) kept.push_back(f);
        }
        mesh.faces = kept;
        CHECK_THROWS_AS(disk_conformal_map(mesh), TopologyError);
    }
}

TEST_CASE("distortion measures") {
    const auto mesh = sphere_cap(pi / 3);
    CapParam self;
    self.theta_c = pi / 3;
    for (const auto& v : mesh.vertices) {
        self.theta.push_back(std::acos(std::clamp(v.z(), -1.0, 1.0)));
        double p = std::atan2(v.y(), v.x());
        self.phi.push_back(p < 0 ? p + 2 * pi : p);
    }
    const auto r = distortion(mesh, self);
    CHECK(r.d_area < 1e-12);
    CHECK(r.d_angle < 1e-12);

    // Normalised area ratios ignore a global scale of the input.
    TriMesh big = mesh;
    for (auto& v : big.vertices) v *= 3.0;
    CHECK(distortion(big, self).d_area < 1e-12);
}

TEST_CASE("parameterize_to_cap on planar and spherical patches") {
    SUBCASE("planar disk at pi/18 stays inside the cap") {
        const auto res = parameterize_to_cap(plane_disk(), pi / 18);
        CHECK(max_theta(res.cap) <= pi / 18 + 1e-9);
        CHECK(res.cap.size() == 576);
        for (double p : res.cap.phi) {
            CHECK(p >= 0.0);
            CHECK(p < 2 * pi);
        }
        // Möbius and stereographic maps are conformal: angle distortion is the disk map's.
        const auto mesh = plane_disk();
        const auto id = cap_from_disk(mesh, res.disk, {}, pi / 18);
        const auto flat_only = distortion(mesh, id).d_angle;
        CHECK(std::abs(res.mobius.report.d_angle - flat_only) < 1e-3);
    }
    for (double tc : {pi / 18, pi / 3, pi / 2}) {
        CAPTURE(tc);
        const auto mesh = sphere_cap(tc);
        const auto res = parameterize_to_cap(mesh, tc);
        CHECK(res.mobius.report.d_angle < 0.02);
        CHECK(res.mobius.report.d_area < 0.05);
        CHECK(res.mobius.report.d_area <= res.mobius.identity_d_area);
        CHECK(std::hypot(res.mobius.coeff.A, res.mobius.coeff.B) < 0.05);
        CHECK(max_theta(res.cap) <= tc + 1e-9);
    }
    CHECK_THROWS_AS(parameterize_to_cap(tetrahedron(), pi / 3), TopologyError);
}

TEST_CASE("Möbius search never worsens the identity and is seed-stable") {
    // An off-centre paraboloid gives the optimiser something to do.
    surfgen::PatchParams p;
    p.depth = 0.6;
    auto mesh = surfgen::gen_analytic_patch(surfgen::PatchKind::ParaboloidCap, p);
    for (auto& v : mesh.vertices) v.z() += 0.3 * v.x();
    const auto d = disk_conformal_map(mesh);
    std::vector<double> seen;
    for (std::uint64_t seed : {1, 2, 3, 10}) {
        SearchBudget b;
        b.seed = seed;
        const auto r = optimize_mobius(mesh, d, pi / 4, b);
        CHECK(r.report.d_area <= r.identity_d_area);
        CHECK(r.coeff.valid());
        for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
        seen.push_back(r.report.d_area);
    }
    const auto [lo, hi] = std::minmax_element(seen.begin(), seen.end());
    CHECK(*hi - *lo < 5e-4);

    const auto again = optimize_mobius(mesh, d, pi / 4);
    CHECK(again.report.d_area == optimize_mobius(mesh, d, pi / 4).report.d_area);
}

TEST_CASE("optimal half-angle") {
    const auto flat = optimize_theta_c(plane_disk(), pi / 18, pi / 2);
    CHECK(flat.theta_c == doctest::Approx(pi / 18).epsilon(1e-12));
    const auto hemi = optimize_theta_c(sphere_cap(pi / 2), pi / 18, 5 * pi / 6);
    CHECK(std::abs(hemi.theta_c - pi / 2) < 10 * pi / 180);
    CHECK_THROWS_AS(optimize_theta_c(plane_disk(), pi / 2, pi / 4), DomainError);
}

TEST_CASE("cap parameterisation files") {
    const auto mesh = sphere_cap(pi / 4, 8);
    const auto res = parameterize_to_cap(mesh, pi / 4);
    const auto back = deserialize_capparam(serialize(res.cap));
    CHECK(back.theta_c == res.cap.theta_c);
    CHECK(back.theta == res.cap.theta);
    CHECK(back.phi == res.cap.phi);
    CHECK(back.mesh_checksum == meshkit::mesh_checksum(mesh));
    CHECK_THROWS_AS(deserialize_capparam("not a capparam\n"), ParseError);
    std::string text = serialize(res.cap);
    text.resize(text.size() / 2);
    CHECK_THROWS_AS(deserialize_capparam(text), ParseError);
}

TEST_CASE("square to disk grid") {
    SplitMix64 rng(8);
    for (int i = 0; i < 500; ++i) {
        const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
        const Vec2 q = diskgrid::square_to_disk(x, y);
        CHECK(q.norm() <= 1.0 + 1e-15);
        const Vec2 s = diskgrid::disk_to_square(q);
        CHECK(std::abs(s.x() - x) < 1e-12);
        CHECK(std::abs(s.y() - y) < 1e-12);
        // Equal-area up to the constant pi/4.
        const double h = 1e-6;
        const Vec2 dx = (diskgrid::square_to_disk(x + h, y) - diskgrid::square_to_disk(x - h, y)) / (2 * h);
        const Vec2 dy = (diskgrid::square_to_disk(x, y + h) - diskgrid::square_to_disk(x, y - h)) / (2 * h);
        if (std::abs(std::abs(x) - std::abs(y)) > 1e-3) CHECK(dx.x() * dy.y() - dx.y() * dy.x() == doctest::Approx(pi / 4).epsilon(1e-5));
    }
    for (int p : {2, 5, 12}) {
        const auto g = diskgrid::disk_grid(p);
        CHECK(g.points.size() == static_cast<std::size_t>(p * p));
        CHECK(g.faces.size() == static_cast<std::size_t>(2 * (p - 1) * (p - 1)));
        auto faces = g.faces;
        CHECK(diskgrid::lawson_flip(g.points, faces) == 0);
    }
}
