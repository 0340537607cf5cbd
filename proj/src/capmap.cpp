#include "capharm/capmap.hpp"
#include "capharm/error.hpp"
#include "capharm/hyperfun.hpp"

#include "util.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace capharm::capmap {

Vec3 CapParam::point(std::size_t i) const {
    const double s = std::sin(theta[i]);
    return {s * std::cos(phi[i]), s * std::sin(phi[i]), std::cos(theta[i])};
}

Vec2 stereographic(const Vec3& p) {
    const double d = 1.0 + p.z();
    if (d == 0.0) throw DomainError("stereographic: point is the south pole");
    return {p.x() / d, p.y() / d};
}

Vec3 inv_stereographic(const Vec2& q) {
    const double s = q.squaredNorm();
    const double d = 1.0 + s;
    return {2.0 * q.x() / d, 2.0 * q.y() / d, (1.0 - s) / d};
}

double cap_disk_radius(double theta_c) {
    const double c = std::cos(theta_c);
    return std::sqrt((1.0 - c) / (1.0 + c));
}

std::complex<double> mobius(const MobiusCoeff& c, double r, std::complex<double> w) {
    const std::complex<double> a(c.A, c.B);
    return r * (w - a) / (1.0 - std::conj(a) * w);
}

std::complex<double> mobius_inverse(const MobiusCoeff& c, double r, std::complex<double> h) {
    const std::complex<double> a(c.A, c.B);
    const std::complex<double> u = h / r;
    return (u + a) / (1.0 + std::conj(a) * u);
}

std::vector<Vec2> mobius_apply(const MobiusCoeff& c, double theta_c, const DiskParam& d) {
    const double r = cap_disk_radius(theta_c);
    std::vector<Vec2> out(d.uv.size());
    for (std::size_t i = 0; i < d.uv.size(); ++i) {
        const auto h = mobius(c, r, {d.uv[i].x(), d.uv[i].y()});
        out[i] = {h.real(), h.imag()};
    }
    return out;
}

CapParam cap_from_disk(const TriMesh& mesh, const DiskParam& d, const MobiusCoeff& c, double theta_c) {
    if (d.uv.size() != mesh.vertices.size())
        throw ConfigError("cap_from_disk: disk map does not match the mesh vertex count");
    CapParam cap;
    cap.theta_c = theta_c;
    cap.mesh_checksum = meshkit::mesh_checksum(mesh);
    const auto h = mobius_apply(c, theta_c, d);
    cap.theta.resize(h.size());
    cap.phi.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Vec3 p = inv_stereographic(h[i]);
        // atan2 form keeps precision near the pole where acos(z) loses digits.
        cap.theta[i] = std::min(std::atan2(std::hypot(p.x(), p.y()), p.z()), theta_c);
        double phi = std::atan2(p.y(), p.x());
        if (phi < 0.0) phi += 2.0 * std::numbers::pi;
        if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
        cap.phi[i] = phi;
    }
    return cap;
}

DistortionReport distortion(const TriMesh& mesh, const CapParam& cap) {
    if (cap.size() != mesh.vertices.size())
        throw ConfigError("distortion: cap parameterisation does not match the mesh vertex count");
    std::vector<Vec3> P(cap.size());
    for (std::size_t i = 0; i < P.size(); ++i) P[i] = cap.point(i);

    const std::size_t nf = mesh.faces.size();
    std::vector<double> a0(nf), a1(nf);
    double s0 = 0.0, s1 = 0.0, dang = 0.0;
    for (std::size_t f = 0; f < nf; ++f) {
        const auto& F = mesh.faces[f];
        const auto& V = mesh.vertices;
        a0[f] = meshkit::triangle_area(V[F[0]], V[F[1]], V[F[2]]);
        a1[f] = meshkit::triangle_area(P[F[0]], P[F[1]], P[F[2]]);
        if (!(a0[f] > 0.0) || !(a1[f] > 0.0))
            throw DegenerateFace("distortion: face " + std::to_string(f) + " has zero area");
        s0 += a0[f];
        s1 += a1[f];
        const auto g0 = meshkit::triangle_angles(V[F[0]], V[F[1]], V[F[2]]);
        const auto g1 = meshkit::triangle_angles(P[F[0]], P[F[1]], P[F[2]]);
        for (int c = 0; c < 3; ++c) dang += std::abs(g1[c] - g0[c]);
    }
    DistortionReport rep;
    double da = 0.0;
    for (std::size_t f = 0; f < nf; ++f) da += std::abs(std::log((a1[f] / s1) / (a0[f] / s0)));
    rep.d_area = da / static_cast<double>(nf);
    rep.d_angle = dang / std::numbers::pi / static_cast<double>(3 * nf);
    return rep;
}

std::string serialize(const CapParam& cap) {
    std::string s = "capharm-capparam 1\n";
    s += "theta_c " + detail::fmt_g17(cap.theta_c) + "\n";
    s += "n_v " + std::to_string(cap.size()) + "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "mesh_checksum %016" PRIx64 "\n", cap.mesh_checksum);
    s += buf;
    for (std::size_t i = 0; i < cap.size(); ++i)
        s += detail::fmt_g17(cap.theta[i]) + " " + detail::fmt_g17(cap.phi[i]) + "\n";
    return s;
}

CapParam deserialize_capparam(const std::string& text) {
    std::istringstream in(text);
    std::string line, key;
    auto expect = [&](const char* name) {
        if (!std::getline(in, line)) throw ParseError(std::string("capparam: missing ") + name);
        std::istringstream ls(line);
        ls >> key;
        if (key != name) throw ParseError("capparam: expected '" + std::string(name) + "', got '" + line + "'");
        std::string rest;
        ls >> rest;
        return rest;
    };
    if (!std::getline(in, line) || line != "capharm-capparam 1") throw ParseError("capparam: bad header");
    CapParam cap;
    std::size_t n = 0;
    try {
        cap.theta_c = std::stod(expect("theta_c"));
        n = std::stoull(expect("n_v"));
        cap.mesh_checksum = std::stoull(expect("mesh_checksum"), nullptr, 16);
    } catch (const std::logic_error&) {
        throw ParseError("capparam: malformed header value");
    }
    cap.theta.resize(n);
    cap.phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(in, line)) throw ParseError("capparam: truncated vertex list");
        std::istringstream ls(line);
        if (!(ls >> cap.theta[i] >> cap.phi[i])) throw ParseError("capparam: bad vertex line " + std::to_string(i));
    }
    return cap;
}

void save_capparam(const CapParam& cap, const std::filesystem::path& path) {
    detail::write_file_atomic(path, serialize(cap));
}

CapParam load_capparam(const std::filesystem::path& path) { return deserialize_capparam(detail::read_file(path)); }

}  // namespace capharm::capmap
