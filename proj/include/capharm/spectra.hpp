#pragma once

#include "capharm/harmonics.hpp"

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

namespace capharm::spectra {

using harmonics::SchCoefficients;
using meshkit::TriMesh;
using meshkit::Vec3;

/// First-degree ellipsoidal cap: the k = 1 content of an expansion.
struct Fdec {
    double a = 0.0, b = 0.0, c = 0.0;  // a >= b >= c >= 0
    std::array<Vec3, 3> axes;          // principal directions matching a, b, c
    Eigen::Matrix3cd A;                // columns (q^-1_1 - q^1_1, i(q^-1_1 + q^1_1), sqrt2 q^0_1), rows x/y/z
    double max_imag = 0.0;             // largest |Im| among the eigenvalues of A A^T
};

/// Semi-axes from the eigenvalues of A A^T (plain transpose, as written).
/// Eigenvalues that come out complex are taken by modulus; the largest
/// imaginary part is kept in `max_imag`. Throws DegenerateFdec when a is below
/// 1e-14 times the coefficient scale, or when k_max < 1.
Fdec fdec(const SchCoefficients& coeffs);

struct SpectrumReport {
    int k_max = 0;
    std::vector<double> raw;                  // Dhat^2_k, index k = 0..k_max
    std::vector<std::array<double, 3>> raw_channel;
    std::vector<double> normalized;           // D^2_k = Dhat^2_k / Dhat^2_1; 0 for k <= 1
    std::vector<double> normalized_z;         // Dhat^2_{k,z} / Dhat^2_1; 0 for k <= 1
    std::vector<double> wavelength;           // omega_k, 0 for k = 0 or when no FDEC is available
    double hurst = 0.0;
    double fd = 3.0;
    double a_fit = 0.0;
    int k_fit_min = 0, k_fit_max = 0;
    bool fitted = false;
    bool fit_on_z = true;
    bool non_fractal = false;                 // fitted H outside (0, 1)
};

/// Rotation-invariant descriptors summed over all three channels.
/// Throws DegenerateFdec if Dhat^2_1 = 0, InsufficientPoints if k_max < 2.
SpectrumReport descriptors(const SchCoefficients& coeffs);

struct HurstFit {
    double hurst = 0.0;
    double fd = 3.0;
    double a_fit = 0.0;
    bool non_fractal = false;
};

/// OLS of log D^2_k on log k over k_lo..k_hi (entries with D^2_k > 0 only).
/// H = -slope / 2, FD = 3 - H. Throws InsufficientPoints with fewer than three
/// usable points, WindowOutOfRange when the range is outside 2..k_max.
HurstFit fit_hurst(const std::vector<double>& normalized, int k_lo, int k_hi);

/// Which descriptor the Hurst fit reads. On a conformally flattened patch the
/// x and y channels carry the tail of the disk coordinates themselves (the
/// rim is not a Neumann eigenfunction), which decays like k^-3 and swamps the
/// roughness. Z uses only the height channel; Total is the summed D^2_k.
enum class HurstChannel { Z, Total };
HurstChannel parse_hurst_channel(const std::string& name);
std::string to_string(HurstChannel c);

/// Fit in place and copy the result into the report.
void fit_hurst(SpectrumReport& report, int k_lo, int k_hi, HurstChannel channel = HurstChannel::Z);

/// omega_k = (2 pi / k) sqrt((a^2 + b^2) / 2) for k = 0..k_max (entry 0 is 0).
std::vector<double> wavelengths(const Fdec& f, int k_max);
double fdec_circumference(const Fdec& f);

/// l(m)_k ~ (pi / (2 theta_c)) (k + 1/2) - 1/2
double asymptotic_degree(double theta_c, double k);
/// k_max ~ (2 theta_c / pi) (2 pi r / omega_min + 1/2) - 1/2
double asymptotic_kmax(double theta_c, double radius, double omega_min);

struct SpectralWindow {
    int k_min = 1;
    int k_max = 1;
};

/// Throws WindowOutOfRange unless 1 <= k_min <= k_max <= coeffs_k_max.
void check_window(const SpectralWindow& w, int coeffs_k_max);

/// Zero every row outside the window. Idempotent.
SchCoefficients apply_window(const SchCoefficients& coeffs, const SpectralWindow& w);

/// Sum of Dhat^2_k inside and outside [k_min, k_max], k >= 1.
struct BandMass {
    double in_band = 0.0;
    double out_band = 0.0;
    double ratio() const { return in_band > 0.0 ? out_band / in_band : 0.0; }
};
BandMass band_mass(const SchCoefficients& coeffs, const SpectralWindow& w);

enum class ProjectionMode { ZOnly, Full3d };
ProjectionMode parse_projection_mode(const std::string& name);
std::string to_string(ProjectionMode mode);

/// Adds the band-limited series of `source` evaluated at the donor's cap
/// coordinates to the donor vertices. ZOnly displaces along the donor's vertex
/// normals by the z-channel; Full3d adds all three channels. Connectivity is
/// unchanged. Throws ThetaCMismatch when the cap half-angles differ by more
/// than 1e-9, WindowOutOfRange for a bad window.
TriMesh project_roughness(const SchCoefficients& source, const SpectralWindow& window, const TriMesh& donor,
                          const capmap::CapParam& donor_cap, const eigensolve::EigenTable& eig,
                          ProjectionMode mode = ProjectionMode::ZOnly);

/// Tab-separated table with columns k, Dhat2, D2, D2_z, omega, then '#' summary lines.
std::string report_tsv(const SpectrumReport& r);

}  // namespace capharm::spectra
