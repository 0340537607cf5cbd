#pragma once

#include "capharm/capmap.hpp"
#include "capharm/eigensolve.hpp"
#include "capharm/meshkit.hpp"

#include <Eigen/Core>

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace capharm::harmonics {

using eigensolve::EigenTable;
using meshkit::TriMesh;
using meshkit::Vec3;

/// Column of (m, k) in the complex basis: j = k^2 + k + m, -k <= m <= k.
constexpr int col_index(int m, int k) { return k * k + k + m; }
constexpr int column_count(int k_max) { return (k_max + 1) * (k_max + 1); }

struct OrderDegree {
    int m;
    int k;
};
OrderDegree col_mk(int j);

/// Only the even (Neumann) set carries shape: k - |m| even.
constexpr bool is_active(int m, int k) { return ((k - (m < 0 ? -m : m)) % 2) == 0; }

/// Complex basis: entry (i, j(m, k)) = Pbar^{|m|}_{l(|m|)_k}(cos theta_i) e^{i m phi_i}
/// for m >= 0 and (-1)^m conj of the |m| entry for m < 0. Columns outside the
/// even set are zero. Throws EigenTableMismatch if `eig` is not an even table
/// for theta_c covering k_max, DomainError for points outside the cap.
Eigen::MatrixXcd eval_basis(double theta_c, const EigenTable& eig, int k_max, std::span<const double> theta,
                            std::span<const double> phi);

/// Real basis used by the solver. For each active (m >= 0, k): m = 0 gives
/// Pbar; m > 0 gives Pbar cos(m phi) and Pbar sin(m phi).
struct RealColumn {
    int m;
    int k;
    bool sine;
};
std::vector<RealColumn> real_columns(int k_max);
Eigen::MatrixXd eval_real_basis(double theta_c, const EigenTable& eig, int k_max, std::span<const double> theta,
                                std::span<const double> phi);

struct SchCoefficients {
    double theta_c = 0.0;
    int k_max = 0;
    Eigen::MatrixXcd q;  // column_count(k_max) x 3 for x, y, z
    Vec3 centroid = Vec3::Zero();

    SchCoefficients() = default;
    SchCoefficients(double theta_c, int k_max);
    std::complex<double> at(int m, int k, int channel) const { return q(col_index(m, k), channel); }
    std::complex<double>& at(int m, int k, int channel) { return q(col_index(m, k), channel); }
    /// Copy with all rows outside k_lo..k_hi set to zero.
    SchCoefficients windowed(int k_lo, int k_hi) const;
};

struct FitDiagnostics {
    std::size_t points = 0;
    std::size_t unknowns = 0;           // real unknowns per channel
    double condition = 0.0;             // 2-norm condition number of the complex B
    bool ill_conditioned = false;       // condition above kIllConditioned
    bool undersampled = false;          // fewer than 4 points per complex column
    double asymmetry = 0.0;             // max |q^-m - (-1)^m conj(q^m)|
    double rms_residual = 0.0;          // over all channels
    std::complex<double> breathing[3];  // fitted k = m = 0 terms, moved into the centroid
};

inline constexpr double kIllConditioned = 1e10;

struct FitResult {
    SchCoefficients coeffs;
    FitDiagnostics diag;
};

/// Least-squares fit of the mean-centred vertex coordinates in the even basis.
/// Solved by a blocked Householder QR of the real basis, which gives the same
/// minimiser as the complex normal equations for real data. The fitted k = 0
/// constant is added to the stored centroid and its row set to zero.
/// Throws Underdetermined when the points do not exceed the active columns.
FitResult fit_coefficients(const TriMesh& mesh, const capmap::CapParam& cap, const EigenTable& eig, int k_max);

/// Low-level form: fit arbitrary real samples (n x 3) at cap angles.
FitResult fit_samples(const Eigen::MatrixX3d& values, std::span<const double> theta, std::span<const double> phi,
                      double theta_c, const EigenTable& eig, int k_max);

/// Real part of sum_{k_lo <= k <= k_hi} sum_m q^m_k C^m_k per channel, plus the
/// centroid when `add_centroid` is set. k_hi < 0 means coeffs.k_max.
std::vector<Vec3> reconstruct(const SchCoefficients& coeffs, const EigenTable& eig, std::span<const double> theta,
                              std::span<const double> phi, int k_lo = 0, int k_hi = -1, bool add_centroid = true);

/// Evaluate at every vertex of a cap parameterisation.
std::vector<Vec3> reconstruct(const SchCoefficients& coeffs, const EigenTable& eig, const capmap::CapParam& cap,
                              int k_lo = 0, int k_hi = -1, bool add_centroid = true);

struct GeodesicDome {
    TriMesh mesh;
    int resolution = 0;       // n
    int points_per_side = 0;  // n / 2
    double theta_c = 0.0;
    std::vector<double> theta, phi;
};

/// Roșca grid with n/2 points per side, Delaunay-triangulated, scaled by
/// r_l = sqrt(2 (1 - cos theta_c)), lifted by the inverse Lambert projection
/// and reflected so the pole sits at +z. n >= 4.
GeodesicDome make_dome(double theta_c, int n);

/// Smallest even n whose grid spacing (C / pi) / (n / 2) on a patch of
/// circumference C is at most omega_min / 4. Never below 4.
int choose_dome_resolution(double omega_min, double fdec_circumference);

/// JSON text with header {format, version, theta_c, k_max, parity, centroid}
/// and rows j -> [re, im] x 3. Doubles round-trip exactly.
std::string to_json(const SchCoefficients& c);
SchCoefficients coefficients_from_json(const std::string& text);
void save_coefficients(const SchCoefficients& c, const std::filesystem::path& path);
SchCoefficients load_coefficients(const std::filesystem::path& path);

}  // namespace capharm::harmonics
