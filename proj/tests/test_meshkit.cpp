#include <doctest.h>

#include "capharm/error.hpp"
#include "capharm/meshkit.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

using namespace capharm;
using namespace capharm::meshkit;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    auto d = fs::temp_directory_path() / "capharm_meshkit_test";
    fs::create_directories(d);
    return d;
}

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream(p, std::ios::binary) << s;
}

TriMesh square() {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

TriMesh grid(int n) {
    TriMesh m;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) m.vertices.emplace_back(i * 0.37, j * 0.41, 0.01 * i * j);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int a = j * (n + 1) + i, b = a + 1, c = a + n + 1, d = c + 1;
            m.faces.push_back({a, b, d});
            m.faces.push_back({a, d, c});
        }
    return m;
}

int euler(const TriMesh& m) {
    std::set<std::pair<int, int>> edges;
    for (const auto& f : m.faces)
        for (int e = 0; e < 3; ++e) edges.insert(std::minmax(f[e], f[(e + 1) % 3]));
    return static_cast<int>(m.vertices.size()) - static_cast<int>(edges.size()) + static_cast<int>(m.faces.size());
}

}  // namespace

TEST_CASE("OBJ load of the smallest disk patch") {
    const auto p = tmp_dir() / "square.obj";
    write_text(p, "# two triangles\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 1/1/1 3/3/3 4/4/4\n");
    const auto m = load_mesh(p);
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 2);
    CHECK(validate_patch(m).boundary_loop_count == 1);
    CHECK(m.faces[1] == Face{0, 2, 3});
}

TEST_CASE("OBJ with index 0 is rejected") {
    const auto p = tmp_dir() / "bad.obj";
    write_text(p, "v 0 0 0\nv 1 0 0\nv 1 1 0\nf 0 1 2\n");
    CHECK_THROWS_AS(load_mesh(p), ParseError);
    write_text(p, "v 0 0 0\nv 1 0 x\n");
    CHECK_THROWS_AS(load_mesh(p), ParseError);
}

TEST_CASE("binary STL welds bit-identical vertices") {
    std::string data(84 + 100, '\0');
    const std::uint32_t n = 2;
    std::memcpy(data.data() + 80, &n, 4);
    const float tri[2][3][3] = {{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}}};
    for (int f = 0; f < 2; ++f) std::memcpy(data.data() + 84 + 50 * f + 12, tri[f], 36);
    const auto p = tmp_dir() / "two.stl";
    write_text(p, data);
    const auto m = load_mesh(p);
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 2);
    CHECK(validate_patch(m).boundary_loop_count == 1);
}

TEST_CASE("validate_patch examples") {
    TriMesh tet;
    tet.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    tet.faces = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
    CHECK(validate_patch(tet).boundary_loop_count == 0);
    CHECK_FALSE(validate_patch(tet).is_valid_patch());

    TriMesh tri;
    tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.faces = {{0, 1, 2}};
    const auto d = validate_patch(tri);
    CHECK(d.boundary_loop_count == 1);
    CHECK(d.nonmanifold_edge_count == 0);
    CHECK(d.is_valid_patch());

    TriMesh bowtie;
    bowtie.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {-1, 0, 0}, {-1, -1, 0}};
    bowtie.faces = {{0, 1, 2}, {0, 3, 4}};
    CHECK(validate_patch(bowtie).boundary_loop_count == 2);
    CHECK_FALSE(validate_patch(bowtie).is_valid_patch());

    TriMesh fin = square();
    fin.vertices.push_back({0.5, 0.5, 1});
    fin.faces.push_back({0, 2, 4});
    CHECK(validate_patch(fin).nonmanifold_edge_count == 1);

    TriMesh dup = square();
    dup.faces.push_back({2, 0, 1});
    CHECK(validate_patch(dup).duplicate_face_count == 1);

    TriMesh sliver = square();
    sliver.vertices.push_back({0.5, 1e-13, 0});
    sliver.faces.push_back({0, 4, 1});
    CHECK(validate_patch(sliver).small_face_count == 1);

    const auto g = grid(6);
    const auto d1 = validate_patch(g);
    const auto d2 = validate_patch(g);
    CHECK(d1.boundary_loop_count == d2.boundary_loop_count);
    CHECK(d1.min_face_area == d2.min_face_area);
    CHECK(d1.is_valid_patch());
}

TEST_CASE("strict loading raises TopologyError") {
    const auto p = tmp_dir() / "tet.obj";
    write_text(p, "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 3 2\nf 1 2 4\nf 2 3 4\nf 1 4 3\n");
    CHECK_NOTHROW(load_mesh(p));
    CHECK_THROWS_AS(load_mesh(p, MeshFormat::Auto, true), TopologyError);
}

TEST_CASE("center_on_mean") {
    TriMesh a;
    a.vertices = {{1, 0, 0}, {-1, 0, 0}};
    auto ca = center_on_mean(a);
    CHECK(ca.centroid.norm() == 0.0);
    CHECK(ca.mesh.vertices[0] == Vec3(1, 0, 0));

    TriMesh b;
    b.vertices = {{2, 2, 2}, {4, 4, 4}};
    auto cb = center_on_mean(b);
    CHECK((cb.centroid - Vec3(3, 3, 3)).norm() < 1e-15);
    CHECK((cb.mesh.vertices[0] - Vec3(-1, -1, -1)).norm() < 1e-15);

    auto g = grid(9);
    for (auto& v : g.vertices) v += Vec3(1e3, -2e3, 5e2);
    auto c1 = center_on_mean(g);
    Vec3 mean = Vec3::Zero();
    for (const auto& v : c1.mesh.vertices) mean += v;
    mean /= c1.mesh.vertices.size();
    CHECK(mean.norm() < 1e-12 * bbox_diagonal(g));
    auto c2 = center_on_mean(c1.mesh);
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        CHECK((c2.mesh.vertices[i] - c1.mesh.vertices[i]).norm() < 1e-12 * bbox_diagonal(g));
}

TEST_CASE("save/load round trips") {
    const auto g = grid(5);
    const auto d = tmp_dir();

    save_mesh(g, d / "g.stl", MeshFormat::StlBinary);
    const auto b = load_mesh(d / "g.stl");
    REQUIRE(b.face_count() == g.face_count());
    for (std::size_t f = 0; f < g.faces.size(); ++f)
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector3f want = g.vertices[g.faces[f][k]].cast<float>();
            const Eigen::Vector3f got = b.vertices[b.faces[f][k]].cast<float>();
            CHECK(std::memcmp(want.data(), got.data(), 12) == 0);
        }

    save_mesh(g, d / "g.obj", MeshFormat::Obj);
    const auto o = load_mesh(d / "g.obj");
    CHECK(o.faces == g.faces);
    CHECK(o.units == "mm");
    for (std::size_t i = 0; i < g.vertices.size(); ++i) CHECK(o.vertices[i] == g.vertices[i]);

    save_mesh(g, d / "ga.stl", MeshFormat::StlAscii);
    const auto a = load_mesh(d / "ga.stl", MeshFormat::StlAscii);
    REQUIRE(a.face_count() == g.face_count());
    for (std::size_t f = 0; f < g.faces.size(); ++f)
        for (int k = 0; k < 3; ++k)
            CHECK((a.vertices[a.faces[f][k]] - g.vertices[g.faces[f][k]]).norm() <= 1e-6 * bbox_diagonal(g));

    for (const auto* m : {&b, &o, &a}) {
        CHECK(validate_patch(*m).boundary_loop_count == validate_patch(g).boundary_loop_count);
        CHECK(euler(*m) == euler(g));
    }
    CHECK_THROWS_AS(save_mesh(g, "/nonexistent-dir/x/y.obj"), IoError);
}

TEST_CASE("boundary loop follows face winding") {
    const auto sq = square();
    const auto loop = boundary_loop(sq);
    CHECK(loop == std::vector<int>{0, 1, 2, 3});
    CHECK(boundary_length(sq) == doctest::Approx(4.0));
}
