#pragma once

#include "capharm/meshkit.hpp"

#include <cstdint>
#include <string>

namespace capharm::surfgen {

using meshkit::TriMesh;

struct FractalSpec {
    double hurst = 0.6;    // in (0, 1)
    double rms = 0.7e-2;   // height RMS, mesh units
    double radius = 1.0;   // disk radius, mesh units
    int resolution = 256;  // grid points per side, >= 32
    std::uint64_t seed = 10;
};

/// Self-affine height field on a disk by spectral synthesis: complex Gaussian
/// white noise on the integer frequency lattice of an N x N periodic square,
/// amplitude |q|^-(1 + H), no roll-off, real part of the inverse transform.
/// Heights are sampled bilinearly at the vertices of the Roșca disk grid with
/// N points per side, centred, and scaled to the target RMS.
/// Deterministic per seed.
TriMesh gen_fractal_disk(const FractalSpec& spec);

/// The periodic height field itself, row-major N x N over [-radius, radius]^2,
/// before the RMS rescale.
std::vector<double> fractal_height_field(const FractalSpec& spec);

enum class PatchKind { PlaneDisk, ParaboloidCap, SphereCap, EllipsoidCap };

PatchKind parse_patch_kind(const std::string& name);
std::string to_string(PatchKind kind);

struct PatchParams {
    int resolution = 24;        // grid points per side
    double radius = 1.0;        // plane-disk and paraboloid-cap footprint
    double depth = 0.2;         // paraboloid-cap apex height above the rim
    double theta_c = 1.0471975511965976;  // sphere- and ellipsoid-cap half-angle
    double a = 1.0, b = 1.0, c = 1.0;     // ellipsoid-cap semi-axes
};

/// Exact analytic geometry on the Roșca disk grid.
///   plane-disk:     z = 0, |(x, y)| <= radius
///   paraboloid-cap: z = depth (1 - rho^2 / radius^2)
///   sphere-cap:     unit sphere, z >= cos(theta_c), equal-area lift of the grid
///   ellipsoid-cap:  the sphere cap scaled by (a, b, c)
/// Throws DomainError on bad parameters.
TriMesh gen_analytic_patch(PatchKind kind, const PatchParams& params = {});

}  // namespace capharm::surfgen
