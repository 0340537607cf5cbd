#include "capharm/harmonics.hpp"
#include "capharm/diskgrid.hpp"
#include "capharm/error.hpp"
#include "capharm/hyperfun.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

namespace capharm::harmonics {

namespace {

constexpr std::size_t kBlockRows = 8192;

void check_table(double theta_c, const EigenTable& eig, int k_max) {
    if (eig.parity() != eigensolve::Parity::Even)
        throw EigenTableMismatch("basis needs the even eigenvalue table");
    if (eig.k_max() < k_max)
        throw EigenTableMismatch("eigen table covers k <= " + std::to_string(eig.k_max()) + ", need " +
                                 std::to_string(k_max));
    if (std::abs(eig.theta_c() - theta_c) > 1e-12 * std::max(1.0, theta_c))
        throw EigenTableMismatch("eigen table is for theta_c=" + std::to_string(eig.theta_c()) +
                                 ", basis requested at " + std::to_string(theta_c));
    if (k_max < 0) throw DomainError("k_max must be non-negative");
}

void check_points(double theta_c, std::span<const double> theta, std::span<const double> phi) {
    if (theta.size() != phi.size()) throw ConfigError("theta and phi lengths differ");
    for (double t : theta)
        if (!(t >= -1e-12 && t <= theta_c + 1e-9))
            throw DomainError("sample point theta=" + std::to_string(t) + " lies outside the cap");
}

// Pbar^m_{l(m)_k}(cos theta_i) for every active (m >= 0, k), keyed like real_columns without sines.
struct Profiles {
    std::vector<OrderDegree> keys;
    std::vector<std::vector<double>> values;
};

Profiles theta_profiles(const EigenTable& eig, int k_max, std::span<const double> theta) {
    std::vector<double> x(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) x[i] = std::cos(std::clamp(theta[i], 0.0, std::numbers::pi));
    Profiles p;
    for (int k = 0; k <= k_max; ++k)
        for (int m = k % 2; m <= k; m += 2) p.keys.push_back({m, k});
    std::vector<double> l(p.keys.size());
    for (std::size_t c = 0; c < p.keys.size(); ++c) l[c] = eig.degree(p.keys[c].m, p.keys[c].k);
    p.values.resize(p.keys.size());
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < p.keys.size(); ++c) {
        try {
            p.values[c] = hyperfun::normalized_alf_many(l[c], p.keys[c].m, x);
        } catch (...) {
#pragma omp critical(capharm_profiles)
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return p;
}

// Real coefficient per real column, from complex q of one channel.
Eigen::VectorXd real_coefficients(const SchCoefficients& c, int channel, int k_lo, int k_hi) {
    const auto cols = real_columns(k_hi);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto [m, k, sine] = cols[i];
        if (k < k_lo) continue;
        if (m == 0) {
            a[static_cast<Eigen::Index>(i)] = c.at(0, k, channel).real();
            continue;
        }
        // Re(q^m C^m + q^-m C^-m) = Re(p C^m) with p = q^m + (-1)^m conj(q^-m).
        const double sign = (m % 2) ? -1.0 : 1.0;
        const std::complex<double> p = c.at(m, k, channel) + sign * std::conj(c.at(-m, k, channel));
        a[static_cast<Eigen::Index>(i)] = sine ? -p.imag() : p.real();
    }
    return a;
}

}  // namespace

OrderDegree col_mk(int j) {
    if (j < 0) throw DomainError("column index must be non-negative");
    const int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(j))));
    int kk = k;
    while (kk * kk > j) --kk;
    while ((kk + 1) * (kk + 1) <= j) ++kk;
    return {j - kk * kk - kk, kk};
}

std::vector<RealColumn> real_columns(int k_max) {
    std::vector<RealColumn> cols;
    for (int k = 0; k <= k_max; ++k)
        for (int m = k % 2; m <= k; m += 2) {
            cols.push_back({m, k, false});
            if (m > 0) cols.push_back({m, k, true});
        }
    return cols;
}

Eigen::MatrixXd eval_real_basis(double theta_c, const EigenTable& eig, int k_max, std::span<const double> theta,
                                std::span<const double> phi) {
    check_table(theta_c, eig, k_max);
    check_points(theta_c, theta, phi);
    const auto prof = theta_profiles(eig, k_max, theta);
    const auto cols = real_columns(k_max);
    const Eigen::Index n = static_cast<Eigen::Index>(theta.size());
    Eigen::MatrixXd B(n, static_cast<Eigen::Index>(cols.size()));
    std::size_t pc = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto [m, k, sine] = cols[c];
        while (prof.keys[pc].m != m || prof.keys[pc].k != k) ++pc;
        const auto& P = prof.values[pc];
        for (Eigen::Index i = 0; i < n; ++i) {
            const double ang = m * phi[static_cast<std::size_t>(i)];
            const double f = m == 0 ? 1.0 : (sine ? std::sin(ang) : std::cos(ang));
            B(i, static_cast<Eigen::Index>(c)) = P[static_cast<std::size_t>(i)] * f;
        }
    }
    return B;
}

Eigen::MatrixXcd eval_basis(double theta_c, const EigenTable& eig, int k_max, std::span<const double> theta,
                            std::span<const double> phi) {
    check_table(theta_c, eig, k_max);
    check_points(theta_c, theta, phi);
    const auto prof = theta_profiles(eig, k_max, theta);
    const Eigen::Index n = static_cast<Eigen::Index>(theta.size());
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, column_count(k_max));
    for (std::size_t c = 0; c < prof.keys.size(); ++c) {
        const auto [m, k] = prof.keys[c];
        const auto& P = prof.values[c];
        const double sign = (m % 2) ? -1.0 : 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::complex<double> v = P[static_cast<std::size_t>(i)] *
                                           std::polar(1.0, m * phi[static_cast<std::size_t>(i)]);
            B(i, col_index(m, k)) = v;
            if (m > 0) B(i, col_index(-m, k)) = sign * std::conj(v);
        }
    }
    return B;
}

SchCoefficients::SchCoefficients(double tc, int km)
    : theta_c(tc), k_max(km), q(Eigen::MatrixXcd::Zero(column_count(km), 3)) {}

SchCoefficients SchCoefficients::windowed(int k_lo, int k_hi) const {
    SchCoefficients out = *this;
    for (int j = 0; j < q.rows(); ++j) {
        const int k = col_mk(j).k;
        if (k < k_lo || k > k_hi) out.q.row(j).setZero();
    }
    return out;
}

FitResult fit_samples(const Eigen::MatrixX3d& values, std::span<const double> theta, std::span<const double> phi,
                      double theta_c, const EigenTable& eig, int k_max) {
    check_table(theta_c, eig, k_max);
    check_points(theta_c, theta, phi);
    const std::size_t n = theta.size();
    if (static_cast<std::size_t>(values.rows()) != n) throw ConfigError("fit: value rows do not match the points");
    if (n <= static_cast<std::size_t>(column_count(k_max)))
        throw Underdetermined("fit: " + std::to_string(n) + " points for " + std::to_string(column_count(k_max)) +
                              " basis columns");
    const auto cols = real_columns(k_max);
    const Eigen::Index nc = static_cast<Eigen::Index>(cols.size());
    const Eigen::Index w = nc + 3;

    // Blocked Householder QR of [B | V]; only the triangular factor is kept.
    Eigen::MatrixXd R(0, w);
    for (std::size_t start = 0; start < n; start += kBlockRows) {
        const std::size_t len = std::min(kBlockRows, n - start);
        const auto th = theta.subspan(start, len), ph = phi.subspan(start, len);
        Eigen::MatrixXd S(R.rows() + static_cast<Eigen::Index>(len), w);
        S.topRows(R.rows()) = R;
        S.block(R.rows(), 0, static_cast<Eigen::Index>(len), nc) = eval_real_basis(theta_c, eig, k_max, th, ph);
        S.block(R.rows(), nc, static_cast<Eigen::Index>(len), 3) =
            values.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(len));
        Eigen::HouseholderQR<Eigen::Ref<Eigen::MatrixXd>> qr(S);
        const Eigen::Index keep = std::min(S.rows(), w);
        R = S.topRows(keep).triangularView<Eigen::Upper>();
    }

    const Eigen::MatrixXd R11 = R.topLeftCorner(nc, nc);
    const Eigen::MatrixXd coef = R11.triangularView<Eigen::Upper>().solve(R.topRightCorner(nc, 3));

    FitResult out;
    auto& d = out.diag;
    d.points = n;
    d.unknowns = static_cast<std::size_t>(nc);
    d.undersampled = n < 4 * static_cast<std::size_t>(column_count(k_max));
    d.rms_residual = R.rows() > nc ? std::sqrt(R.bottomRightCorner(R.rows() - nc, 3).squaredNorm() / static_cast<double>(n)) : 0.0;

    // The complex basis is the real one times a block-unitary map scaled by
    // sqrt(2) on m != 0 columns, so its condition number is that of R11 D.
    Eigen::MatrixXd R11d = R11;
    for (Eigen::Index c = 0; c < nc; ++c)
        if (cols[static_cast<std::size_t>(c)].m != 0) R11d.col(c) *= std::numbers::sqrt2;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(R11d);
    const auto& sv = svd.singularValues();
    d.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
    d.ill_conditioned = !(d.condition < kIllConditioned);

    SchCoefficients& q = out.coeffs;
    q = SchCoefficients(theta_c, k_max);
    for (Eigen::Index c = 0; c < nc; ++c) {
        const auto [m, k, sine] = cols[static_cast<std::size_t>(c)];
        if (sine) continue;
        for (int ch = 0; ch < 3; ++ch) {
            const double a = coef(c, ch);
            if (m == 0) {
                q.at(0, k, ch) = a;
                continue;
            }
            const double b = coef(c + 1, ch);  // sine column follows the cosine one
            const double sign = (m % 2) ? -1.0 : 1.0;
            q.at(m, k, ch) = std::complex<double>(a, -b) * 0.5;
            q.at(-m, k, ch) = sign * std::complex<double>(a, b) * 0.5;
        }
    }
    for (int k = 1; k <= k_max; ++k)
        for (int m = 1; m <= k; ++m)
            for (int ch = 0; ch < 3; ++ch) {
                const double sign = (m % 2) ? -1.0 : 1.0;
                d.asymmetry = std::max(d.asymmetry, std::abs(q.at(-m, k, ch) - sign * std::conj(q.at(m, k, ch))));
            }
    for (int ch = 0; ch < 3; ++ch) {
        d.breathing[ch] = q.at(0, 0, ch);
        q.centroid[ch] += q.at(0, 0, ch).real();
        q.at(0, 0, ch) = 0.0;
    }
    return out;
}

FitResult fit_coefficients(const TriMesh& mesh, const capmap::CapParam& cap, const EigenTable& eig, int k_max) {
    if (cap.size() != mesh.vertices.size())
        throw ConfigError("fit: cap parameterisation does not match the mesh vertex count");
    const auto centred = meshkit::center_on_mean(mesh);
    Eigen::MatrixX3d V(static_cast<Eigen::Index>(mesh.vertices.size()), 3);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        V.row(static_cast<Eigen::Index>(i)) = centred.mesh.vertices[i].transpose();
    auto out = fit_samples(V, cap.theta, cap.phi, cap.theta_c, eig, k_max);
    out.coeffs.centroid += centred.centroid;
    return out;
}

std::vector<Vec3> reconstruct(const SchCoefficients& coeffs, const EigenTable& eig, std::span<const double> theta,
                              std::span<const double> phi, int k_lo, int k_hi, bool add_centroid) {
    if (k_hi < 0) k_hi = coeffs.k_max;
    if (k_hi > coeffs.k_max || k_lo < 0)
        throw WindowOutOfRange("reconstruct: window [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                               "] outside [0, " + std::to_string(coeffs.k_max) + "]");
    std::vector<Vec3> out(theta.size(), add_centroid ? coeffs.centroid : Vec3::Zero());
    if (k_lo > k_hi) return out;
    Eigen::MatrixX3d a(static_cast<Eigen::Index>(real_columns(k_hi).size()), 3);
    for (int ch = 0; ch < 3; ++ch) a.col(ch) = real_coefficients(coeffs, ch, k_lo, k_hi);
    for (std::size_t start = 0; start < theta.size(); start += kBlockRows) {
        const std::size_t len = std::min(kBlockRows, theta.size() - start);
        const Eigen::MatrixXd B =
            eval_real_basis(coeffs.theta_c, eig, k_hi, theta.subspan(start, len), phi.subspan(start, len));
        const Eigen::MatrixX3d v = B * a;
        for (std::size_t i = 0; i < len; ++i) out[start + i] += v.row(static_cast<Eigen::Index>(i)).transpose();
    }
    return out;
}

std::vector<Vec3> reconstruct(const SchCoefficients& coeffs, const EigenTable& eig, const capmap::CapParam& cap,
                              int k_lo, int k_hi, bool add_centroid) {
    return reconstruct(coeffs, eig, cap.theta, cap.phi, k_lo, k_hi, add_centroid);
}

GeodesicDome make_dome(double theta_c, int n) {
    hyperfun::check_theta_c(theta_c);
    if (n < 4) throw ConfigError("dome resolution must be at least 4, got " + std::to_string(n));
    const int p = n / 2;
    const auto grid = diskgrid::disk_grid(p);
    GeodesicDome d;
    d.resolution = n;
    d.points_per_side = p;
    d.theta_c = theta_c;
    const double rl = std::sqrt(2.0 * (1.0 - std::cos(theta_c)));
    d.mesh.vertices.reserve(grid.points.size());
    for (const auto& q : grid.points) {
        const double x = rl * q.x(), y = rl * q.y();
        const double s2 = x * x + y * y;
        const double f = std::sqrt(std::max(0.0, 1.0 - 0.25 * s2));
        // Inverse Lambert lift puts the centre at the south pole; reflect it to +z.
        const Vec3 v(f * x, f * y, -(-1.0 + 0.5 * s2));
        d.mesh.vertices.push_back(v);
        d.theta.push_back(std::min(std::atan2(std::hypot(v.x(), v.y()), v.z()), theta_c));
        double ph = std::atan2(v.y(), v.x());
        if (ph < 0.0) ph += 2.0 * std::numbers::pi;
        if (ph >= 2.0 * std::numbers::pi) ph = 0.0;
        d.phi.push_back(ph);
    }
    d.mesh.faces = grid.faces;
    d.mesh.units = "1";
    return d;
}

int choose_dome_resolution(double omega_min, double fdec_circumference) {
    if (!(omega_min > 0.0) || !(fdec_circumference > 0.0))
        throw DomainError("choose_dome_resolution: lengths must be positive");
    const double p = std::ceil(4.0 * fdec_circumference / (std::numbers::pi * omega_min) - 1e-12);
    return std::max(4, 2 * static_cast<int>(p));
}

}  // namespace capharm::harmonics
