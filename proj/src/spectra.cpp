#include "capharm/spectra.hpp"
#include "capharm/error.hpp"

#include "util.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace capharm::spectra {

namespace {

using cd = std::complex<double>;

// Real direction of a complex eigenvector: strip the phase of its largest entry.
Vec3 real_direction(const Eigen::Vector3cd& v) {
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    const cd phase = std::abs(v(big)) > 0.0 ? std::conj(v(big)) / std::abs(v(big)) : cd(1.0);
    Vec3 r = (v * phase).real();
    const double n = r.norm();
    return n > 0.0 ? Vec3(r / n) : Vec3::UnitX();
}

}  // namespace

Fdec fdec(const SchCoefficients& coeffs) {
    if (coeffs.k_max < 1) throw DegenerateFdec("fdec: coefficients stop below k = 1");
    Fdec f;
    const cd i(0.0, 1.0);
    for (int ch = 0; ch < 3; ++ch) {
        const cd qm = coeffs.at(-1, 1, ch), qp = coeffs.at(1, 1, ch), q0 = coeffs.at(0, 1, ch);
        f.A(ch, 0) = qm - qp;
        f.A(ch, 1) = i * (qm + qp);
        f.A(ch, 2) = std::numbers::sqrt2 * q0;
    }
    const Eigen::Matrix3cd M = f.A * f.A.transpose();
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(M);
    if (es.info() != Eigen::Success) throw DegenerateFdec("fdec: eigen-decomposition of A A^T failed");

    std::array<int, 3> order{0, 1, 2};
    const auto& ev = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&](int p, int q) { return std::abs(ev(p)) > std::abs(ev(q)); });
    double scale = 0.0;
    for (Eigen::Index r = 0; r < coeffs.q.rows(); ++r)
        for (int ch = 0; ch < 3; ++ch) scale = std::max(scale, std::abs(coeffs.q(r, ch)));
    std::array<double, 3> len{};
    for (int j = 0; j < 3; ++j) {
        len[j] = std::sqrt(std::abs(ev(order[j])));
        f.max_imag = std::max(f.max_imag, std::abs(ev(order[j]).imag()));
    }
    if (!(len[0] > 1e-14 * scale) || len[0] == 0.0) throw DegenerateFdec("fdec: no k = 1 content");
    f.a = len[0];
    f.b = len[1];
    f.c = len[2];

    // Gram-Schmidt in order of decreasing length keeps the axes orthonormal
    // when two lengths coincide.
    for (int j = 0; j < 3; ++j) {
        Vec3 v = real_direction(es.eigenvectors().col(order[j]));
        for (int p = 0; p < j; ++p) v -= v.dot(f.axes[p]) * f.axes[p];
        if (v.norm() < 1e-8) {
            v = j == 2 ? f.axes[0].cross(f.axes[1]) : Vec3::Unit(j);
            for (int p = 0; p < j; ++p) v -= v.dot(f.axes[p]) * f.axes[p];
        }
        f.axes[j] = v.normalized();
    }
    return f;
}

SpectrumReport descriptors(const SchCoefficients& coeffs) {
    if (coeffs.k_max < 2) throw InsufficientPoints("descriptors: need k_max >= 2");
    SpectrumReport r;
    r.k_max = coeffs.k_max;
    const auto n = static_cast<std::size_t>(coeffs.k_max + 1);
    r.raw.assign(n, 0.0);
    r.raw_channel.assign(n, {0.0, 0.0, 0.0});
    r.normalized.assign(n, 0.0);
    r.normalized_z.assign(n, 0.0);
    for (int k = 0; k <= coeffs.k_max; ++k)
        for (int m = -k; m <= k; ++m)
            for (int ch = 0; ch < 3; ++ch) r.raw_channel[k][ch] += std::norm(coeffs.at(m, k, ch));
    for (std::size_t k = 0; k < n; ++k) r.raw[k] = r.raw_channel[k][0] + r.raw_channel[k][1] + r.raw_channel[k][2];
    if (!(r.raw[1] > 0.0)) throw DegenerateFdec("descriptors: Dhat^2_1 is zero, nothing to normalise by");
    for (std::size_t k = 2; k < n; ++k) {
        r.normalized[k] = r.raw[k] / r.raw[1];
        r.normalized_z[k] = r.raw_channel[k][2] / r.raw[1];
    }
    try {
        r.wavelength = wavelengths(fdec(coeffs), coeffs.k_max);
    } catch (const DegenerateFdec&) {
        r.wavelength.assign(n, 0.0);
    }
    return r;
}

HurstFit fit_hurst(const std::vector<double>& normalized, int k_lo, int k_hi) {
    const int k_max = static_cast<int>(normalized.size()) - 1;
    if (k_lo < 2 || k_hi > k_max || k_lo > k_hi)
        throw WindowOutOfRange("fit_hurst: range [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                               "] must lie in [2, " + std::to_string(k_max) + "]");
    std::vector<double> xs, ys;
    for (int k = k_lo; k <= k_hi; ++k)
        if (normalized[k] > 0.0) {
            xs.push_back(std::log(static_cast<double>(k)));
            ys.push_back(std::log(normalized[k]));
        }
    if (xs.size() < 3) throw InsufficientPoints("fit_hurst: fewer than three positive descriptors in range");
    const double nx = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / nx;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / nx;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxy / sxx;
    HurstFit h;
    h.hurst = -slope / 2.0;
    h.fd = 3.0 - h.hurst;
    h.a_fit = std::exp(my - slope * mx);
    h.non_fractal = !(h.hurst > 0.0 && h.hurst < 1.0);
    return h;
}

HurstChannel parse_hurst_channel(const std::string& name) {
    if (name == "z") return HurstChannel::Z;
    if (name == "total") return HurstChannel::Total;
    throw ConfigError("unknown Hurst channel '" + name + "' (expected z or total)");
}

std::string to_string(HurstChannel c) { return c == HurstChannel::Z ? "z" : "total"; }

void fit_hurst(SpectrumReport& report, int k_lo, int k_hi, HurstChannel channel) {
    const HurstFit h = fit_hurst(channel == HurstChannel::Z ? report.normalized_z : report.normalized, k_lo, k_hi);
    report.fit_on_z = channel == HurstChannel::Z;
    report.hurst = h.hurst;
    report.fd = h.fd;
    report.a_fit = h.a_fit;
    report.non_fractal = h.non_fractal;
    report.k_fit_min = k_lo;
    report.k_fit_max = k_hi;
    report.fitted = true;
}

double fdec_circumference(const Fdec& f) {
    return 2.0 * std::numbers::pi * std::sqrt(0.5 * (f.a * f.a + f.b * f.b));
}

std::vector<double> wavelengths(const Fdec& f, int k_max) {
    std::vector<double> w(static_cast<std::size_t>(std::max(k_max, 0) + 1), 0.0);
    const double c = fdec_circumference(f);
    for (int k = 1; k <= k_max; ++k) w[k] = c / k;
    return w;
}

double asymptotic_degree(double theta_c, double k) {
    return std::numbers::pi / (2.0 * theta_c) * (k + 0.5) - 0.5;
}

double asymptotic_kmax(double theta_c, double radius, double omega_min) {
    return 2.0 * theta_c / std::numbers::pi * (2.0 * std::numbers::pi * radius / omega_min + 0.5) - 0.5;
}

void check_window(const SpectralWindow& w, int coeffs_k_max) {
    if (w.k_min < 1 || w.k_min > w.k_max || w.k_max > coeffs_k_max)
        throw WindowOutOfRange("window [" + std::to_string(w.k_min) + ", " + std::to_string(w.k_max) +
                               "] must satisfy 1 <= min <= max <= " + std::to_string(coeffs_k_max));
}

SchCoefficients apply_window(const SchCoefficients& coeffs, const SpectralWindow& w) {
    check_window(w, coeffs.k_max);
    return coeffs.windowed(w.k_min, w.k_max);
}

BandMass band_mass(const SchCoefficients& coeffs, const SpectralWindow& w) {
    BandMass b;
    for (int k = 1; k <= coeffs.k_max; ++k) {
        double s = 0.0;
        for (int m = -k; m <= k; ++m)
            for (int ch = 0; ch < 3; ++ch) s += std::norm(coeffs.at(m, k, ch));
        (k >= w.k_min && k <= w.k_max ? b.in_band : b.out_band) += s;
    }
    return b;
}

ProjectionMode parse_projection_mode(const std::string& name) {
    if (name == "z-only") return ProjectionMode::ZOnly;
    if (name == "full-3d") return ProjectionMode::Full3d;
    throw ConfigError("unknown projection mode '" + name + "' (expected z-only or full-3d)");
}

std::string to_string(ProjectionMode mode) { return mode == ProjectionMode::ZOnly ? "z-only" : "full-3d"; }

TriMesh project_roughness(const SchCoefficients& source, const SpectralWindow& window, const TriMesh& donor,
                          const capmap::CapParam& donor_cap, const eigensolve::EigenTable& eig, ProjectionMode mode) {
    if (std::abs(source.theta_c - donor_cap.theta_c) > 1e-9)
        throw ThetaCMismatch("source theta_c " + detail::fmt_g17(source.theta_c) + " differs from donor theta_c " +
                             detail::fmt_g17(donor_cap.theta_c) + "; re-analyze the source at the donor's theta_c");
    check_window(window, source.k_max);
    if (donor_cap.size() != donor.vertices.size())
        throw ConfigError("donor cap parameterisation does not match the donor mesh");
    const auto disp = harmonics::reconstruct(source, eig, donor_cap, window.k_min, window.k_max, false);
    TriMesh out = donor;
    if (mode == ProjectionMode::Full3d) {
        for (std::size_t i = 0; i < out.vertices.size(); ++i) out.vertices[i] += disp[i];
    } else {
        const auto normals = meshkit::vertex_normals(donor);
        for (std::size_t i = 0; i < out.vertices.size(); ++i) out.vertices[i] += disp[i].z() * normals[i];
    }
    return out;
}

std::string report_tsv(const SpectrumReport& r) {
    std::ostringstream os;
    os << "k\tDhat2\tD2\tD2_z\tomega\n";
    for (int k = 0; k <= r.k_max; ++k) {
        os << k << '\t' << detail::fmt_g17(r.raw[k]) << '\t' << detail::fmt_g17(r.normalized[k]) << '\t'
           << detail::fmt_g17(r.normalized_z[k]) << '\t'
           << detail::fmt_g17(k < static_cast<int>(r.wavelength.size()) ? r.wavelength[k] : 0.0) << '\n';
    }
    if (r.fitted) {
        os << "# H\t" << detail::fmt_g17(r.hurst) << "\n# FD\t" << detail::fmt_g17(r.fd) << "\n# fit_range\t"
           << r.k_fit_min << '\t' << r.k_fit_max << "\n# channel\t" << (r.fit_on_z ? "z" : "total") << "\n# a_fit\t" << detail::fmt_g17(r.a_fit) << '\n';
        if (r.non_fractal) os << "# warning\tNonFractal\n";
    }
    return os.str();
}

}  // namespace capharm::spectra
