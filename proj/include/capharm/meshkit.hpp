#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace capharm::meshkit {

using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::optional<std::vector<double>> attribute;  // one scalar per vertex
    std::string units = "mm";

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return faces.size(); }
};

struct MeshDiagnostics {
    std::size_t vertex_count = 0;
    std::size_t face_count = 0;
    std::size_t boundary_loop_count = 0;
    double min_face_area = 0.0;
    std::size_t duplicate_face_count = 0;
    std::size_t nonmanifold_edge_count = 0;
    // Extra counters; zero for every well-formed patch.
    std::size_t out_of_range_index_count = 0;
    std::size_t repeated_index_count = 0;
    std::size_t small_face_count = 0;  // area below area_threshold
    double area_threshold = 0.0;

    /// True when the mesh is an acceptable open disk patch.
    bool is_valid_patch() const;
    /// Human-readable list of violated rules, empty when valid.
    std::vector<std::string> problems() const;
};

enum class MeshFormat { Obj, StlAscii, StlBinary, Auto };

MeshFormat parse_mesh_format(const std::string& name);
std::string to_string(MeshFormat format);
/// Picks a format from the file extension (".obj", ".stl" maps to binary STL).
MeshFormat format_from_extension(const std::filesystem::path& path);

/// Reads a mesh. When `strict` is set, a mesh that fails validate_patch raises
/// TopologyError.
TriMesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::Auto,
                  bool strict = false);
void save_mesh(const TriMesh& mesh, const std::filesystem::path& path,
               MeshFormat format = MeshFormat::Obj);

MeshDiagnostics validate_patch(const TriMesh& mesh);

struct Centered {
    TriMesh mesh;
    Vec3 centroid;
};
Centered center_on_mean(const TriMesh& mesh);

double bbox_diagonal(const TriMesh& mesh);
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
/// Interior angles at a, b, c in radians.
std::array<double, 3> triangle_angles(const Vec3& a, const Vec3& b, const Vec3& c);
std::vector<double> face_areas(const TriMesh& mesh);
/// Area-weighted unit vertex normals.
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

/// Ordered boundary loop of a disk patch, following face winding.
/// Throws TopologyError unless the mesh has exactly one simple boundary loop.
std::vector<int> boundary_loop(const TriMesh& mesh);

/// Total length of the single boundary loop.
double boundary_length(const TriMesh& mesh);

/// 64-bit FNV-1a over vertex coordinates and face indices.
std::uint64_t mesh_checksum(const TriMesh& mesh);

}  // namespace capharm::meshkit
