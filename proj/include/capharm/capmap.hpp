#pragma once

#include "capharm/meshkit.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace capharm::capmap {

using meshkit::TriMesh;
using meshkit::Vec3;
using Vec2 = Eigen::Vector2d;

/// Planar map of a disk patch onto the closed unit disk, one point per vertex.
struct DiskParam {
    std::vector<Vec2> uv;
    std::string method;      // "cotangent" or "mean-value"
    int iterations = 0;      // boundary refinement sweeps
    double residual = 0.0;   // conformal energy E_D - A after refinement
};

/// Per-vertex cap coordinates for a mesh.
struct CapParam {
    double theta_c = 0.0;
    std::vector<double> theta;
    std::vector<double> phi;  // [0, 2 pi)
    std::uint64_t mesh_checksum = 0;

    std::size_t size() const { return theta.size(); }
    /// Point on the unit sphere for vertex i.
    Vec3 point(std::size_t i) const;
};

/// Centre A + iB of the disk automorphism; the cap radius follows from theta_c.
struct MobiusCoeff {
    double A = 0.0;
    double B = 0.0;
    bool valid() const { return A * A + B * B < 1.0; }
};

struct DistortionReport {
    double d_area = 0.0;
    double d_angle = 0.0;
};

struct DiskMapOptions {
    int max_refine_iterations = 100;
    double refine_tol = 1e-10;  // relative conformal-energy decrease to stop
};

/// Conformal map onto the unit disk: cotangent harmonic map with arc-length
/// boundary, then boundary positions are moved along the circle to minimise
/// the discrete conformal energy. Falls back to mean-value weights with the
/// arc-length boundary when the cotangent map folds.
/// Throws TopologyError for anything but a single-boundary manifold patch.
DiskParam disk_conformal_map(const TriMesh& mesh, const DiskMapOptions& opt = {});

/// Number of faces whose planar signed area is not positive.
std::size_t count_folds(const TriMesh& mesh, const std::vector<Vec2>& uv);

/// South-pole stereographic projection. DomainError at z = -1.
Vec2 stereographic(const Vec3& p);
Vec3 inv_stereographic(const Vec2& q);

/// tan(theta_c / 2): radius of the stereographic image of the cap rim.
double cap_disk_radius(double theta_c);

/// h(w) = r (w - a) / (1 - conj(a) w).
std::complex<double> mobius(const MobiusCoeff& c, double r, std::complex<double> w);
/// Inverse of mobius() for the same (c, r).
std::complex<double> mobius_inverse(const MobiusCoeff& c, double r, std::complex<double> h);
/// Applies h to every disk point; the result lies in the disk of radius r.
std::vector<Vec2> mobius_apply(const MobiusCoeff& c, double theta_c, const DiskParam& d);

/// f = inv_stereographic o h o g, returned as (theta, phi).
CapParam cap_from_disk(const TriMesh& mesh, const DiskParam& d, const MobiusCoeff& c, double theta_c);

/// Area and angle distortion between the mesh and its cap image. Cap triangle
/// areas are flat 3D areas of the mapped vertices.
/// Throws DegenerateFace if a face has zero area in either domain.
DistortionReport distortion(const TriMesh& mesh, const CapParam& cap);

struct SearchBudget {
    int population = 30;
    int iterations = 20;
    double alpha = 0.97;        // contraction of the sampling box per iteration
    int polish_evaluations = 200;
    std::uint64_t seed = 10;
    int theta_grid = 7;         // optimize_theta_c coarse grid size
    double theta_tol = 1e-4;    // golden-section bracket width, radians
};

struct MobiusResult {
    MobiusCoeff coeff;
    DistortionReport report;
    double identity_d_area = 0.0;
    int evaluations = 0;
    std::vector<double> history;  // best d_area after each outer iteration
};

/// Population search over Möbius centres followed by a Nelder-Mead polish.
/// The identity is evaluated first and is only replaced by a strictly better
/// candidate.
MobiusResult optimize_mobius(const TriMesh& mesh, const DiskParam& d, double theta_c,
                             const SearchBudget& budget = {});

struct CapResult {
    CapParam cap;
    DiskParam disk;
    MobiusResult mobius;
};

CapResult parameterize_to_cap(const TriMesh& mesh, double theta_c, const SearchBudget& budget = {});
/// Same, reusing a disk map that was already computed for `mesh`.
CapResult parameterize_to_cap(const TriMesh& mesh, const DiskParam& disk, double theta_c,
                              const SearchBudget& budget = {});

struct ThetaSearchResult {
    double theta_c = 0.0;
    CapResult best;
    std::vector<std::pair<double, double>> probes;  // (theta_c, d_area) in evaluation order
};

/// 1D search of the optimal half-angle in [theta_lb, theta_ub]: a uniform
/// grid, then golden-section refinement around the best grid point. Among
/// values within 1e-4 of the best objective the smallest theta_c wins.
ThetaSearchResult optimize_theta_c(const TriMesh& mesh, double theta_lb, double theta_ub,
                                   const SearchBudget& budget = {});

/// Text file: header lines then "theta phi" per vertex at 17 digits.
std::string serialize(const CapParam& cap);
CapParam deserialize_capparam(const std::string& text);
void save_capparam(const CapParam& cap, const std::filesystem::path& path);
CapParam load_capparam(const std::filesystem::path& path);

}  // namespace capharm::capmap
