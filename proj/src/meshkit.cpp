#include "capharm/meshkit.hpp"

#include "capharm/error.hpp"
#include "util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace capharm::meshkit {

namespace {

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

bool face_in_range(const Face& f, std::size_t nv) {
    for (int i : f)
        if (i < 0 || static_cast<std::size_t>(i) >= nv) return false;
    return true;
}

}  // namespace

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

std::array<double, 3> triangle_angles(const Vec3& a, const Vec3& b, const Vec3& c) {
    auto angle = [](const Vec3& p, const Vec3& q, const Vec3& r) {
        const Vec3 u = q - p, v = r - p;
        return std::atan2(u.cross(v).norm(), u.dot(v));
    };
    return {angle(a, b, c), angle(b, c, a), angle(c, a, b)};
}

double bbox_diagonal(const TriMesh& mesh) {
    if (mesh.vertices.empty()) return 0.0;
    Vec3 lo = mesh.vertices.front(), hi = lo;
    for (const auto& v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

std::vector<double> face_areas(const TriMesh& mesh) {
    std::vector<double> out(mesh.faces.size());
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        const auto& f = mesh.faces[i];
        out[i] = triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
    }
    return out;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
    std::vector<Vec3> n(mesh.vertices.size(), Vec3::Zero());
    for (const auto& f : mesh.faces) {
        const Vec3 w = (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                           .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
        for (int i : f) n[i] += w;
    }
    for (auto& v : n) {
        const double len = v.norm();
        if (len > 0) v /= len;
    }
    return n;
}

bool MeshDiagnostics::is_valid_patch() const { return problems().empty(); }

std::vector<std::string> MeshDiagnostics::problems() const {
    std::vector<std::string> out;
    if (vertex_count == 0 || face_count == 0) out.emplace_back("mesh is empty");
    if (out_of_range_index_count) out.emplace_back("face indices out of range");
    if (repeated_index_count) out.emplace_back("faces with repeated vertex indices");
    if (duplicate_face_count) out.emplace_back("duplicated faces");
    if (nonmanifold_edge_count) out.emplace_back("non-manifold edges");
    if (small_face_count) out.emplace_back("faces with near-zero area");
    if (boundary_loop_count != 1)
        out.emplace_back("expected exactly one boundary loop, found " +
                         std::to_string(boundary_loop_count));
    return out;
}

MeshDiagnostics validate_patch(const TriMesh& mesh) {
    MeshDiagnostics d;
    d.vertex_count = mesh.vertices.size();
    d.face_count = mesh.faces.size();
    const double diag = bbox_diagonal(mesh);
    d.area_threshold = 1e-12 * diag * diag;
    d.min_face_area = mesh.faces.empty() ? 0.0 : std::numeric_limits<double>::infinity();

    std::unordered_map<std::uint64_t, int> edge_use;
    std::set<std::array<int, 3>> seen;
    for (const auto& f : mesh.faces) {
        if (!face_in_range(f, mesh.vertices.size())) {
            ++d.out_of_range_index_count;
            continue;
        }
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            ++d.repeated_index_count;
            d.min_face_area = 0.0;
            continue;
        }
        std::array<int, 3> key = f;
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) ++d.duplicate_face_count;

        const double a =
            triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
        d.min_face_area = std::min(d.min_face_area, a);
        if (a < d.area_threshold || a == 0.0) ++d.small_face_count;
        for (int e = 0; e < 3; ++e) ++edge_use[edge_key(f[e], f[(e + 1) % 3])];
    }

    // Boundary loops: in the graph of free edges every vertex of a manifold
    // border has even degree, and each pinch vertex of degree 2k joins k loops.
    // Loops = components + E - V, which gives 1 for a disk and 2 for a bowtie.
    std::map<int, std::vector<int>> adj;
    std::size_t boundary_edges = 0;
    for (const auto& [key, count] : edge_use) {
        if (count > 2) ++d.nonmanifold_edge_count;
        if (count != 1) continue;
        const int a = static_cast<int>(key >> 32);
        const int b = static_cast<int>(key & 0xffffffffu);
        adj[a].push_back(b);
        adj[b].push_back(a);
        ++boundary_edges;
    }
    std::size_t components = 0;
    std::set<int> visited;
    for (const auto& [v, _] : adj) {
        if (visited.count(v)) continue;
        ++components;
        std::vector<int> stack{v};
        visited.insert(v);
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w : adj[u])
                if (visited.insert(w).second) stack.push_back(w);
        }
    }
    const long loops = static_cast<long>(components) + static_cast<long>(boundary_edges) -
                       static_cast<long>(adj.size());
    d.boundary_loop_count = static_cast<std::size_t>(std::max(0L, loops));
    if (!std::isfinite(d.min_face_area)) d.min_face_area = 0.0;
    return d;
}

Centered center_on_mean(const TriMesh& mesh) {
    Centered out{mesh, Vec3::Zero()};
    if (mesh.vertices.empty()) return out;
    // Two passes so the residual mean is at rounding level of the deviations.
    Vec3 mean = Vec3::Zero();
    for (const auto& v : mesh.vertices) mean += v;
    mean /= static_cast<double>(mesh.vertices.size());
    Vec3 corr = Vec3::Zero();
    for (const auto& v : mesh.vertices) corr += v - mean;
    mean += corr / static_cast<double>(mesh.vertices.size());
    for (auto& v : out.mesh.vertices) v -= mean;
    out.centroid = mean;
    return out;
}

std::vector<int> boundary_loop(const TriMesh& mesh) {
    const auto diag = validate_patch(mesh);
    if (diag.boundary_loop_count != 1 || diag.nonmanifold_edge_count ||
        diag.out_of_range_index_count || diag.repeated_index_count)
        throw TopologyError("mesh is not a disk patch with a single boundary loop");

    std::unordered_map<std::uint64_t, int> edge_use;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) ++edge_use[edge_key(f[e], f[(e + 1) % 3])];
    // Directed free half-edges keep the face winding, so the loop runs with
    // the patch interior on its left.
    std::unordered_map<int, int> next;
    for (const auto& f : mesh.faces)
        for (int e = 0; e < 3; ++e) {
            const int a = f[e], b = f[(e + 1) % 3];
            if (edge_use[edge_key(a, b)] == 1) {
                if (next.count(a)) throw TopologyError("boundary loop is pinched");
                next[a] = b;
            }
        }
    int start = next.begin()->first;
    for (const auto& [a, _] : next) start = std::min(start, a);
    std::vector<int> loop{start};
    for (int v = next.at(start); v != start; v = next.at(v)) {
        loop.push_back(v);
        if (loop.size() > next.size()) throw TopologyError("boundary loop does not close");
    }
    if (loop.size() != next.size()) throw TopologyError("boundary is not a single loop");
    return loop;
}

double boundary_length(const TriMesh& mesh) {
    const auto loop = boundary_loop(mesh);
    double len = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i)
        len += (mesh.vertices[loop[(i + 1) % loop.size()]] - mesh.vertices[loop[i]]).norm();
    return len;
}

std::uint64_t mesh_checksum(const TriMesh& mesh) {
    std::uint64_t h = detail::kFnvOffset;
    for (const auto& v : mesh.vertices) h = detail::fnv1a(v.data(), 3 * sizeof(double), h);
    for (const auto& f : mesh.faces) h = detail::fnv1a(f.data(), 3 * sizeof(int), h);
    return h;
}

}  // namespace capharm::meshkit
