#include "capharm/diskgrid.hpp"
#include "capharm/error.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

namespace capharm::diskgrid {

namespace {

constexpr double kQuarterPi = 0.25 * std::numbers::pi;

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// > 0 when d lies strictly inside the circumcircle of the CCW triangle abc.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

Vec2 square_to_disk(double x, double y) {
    if (x == 0.0 && y == 0.0) return {0.0, 0.0};
    if (std::abs(y) <= std::abs(x)) {
        const double a = kQuarterPi * y / x;
        return {x * std::cos(a), x * std::sin(a)};
    }
    const double a = kQuarterPi * x / y;
    return {y * std::sin(a), y * std::cos(a)};
}

Vec2 disk_to_square(const Vec2& q) {
    const double X = q.x(), Y = q.y();
    const double rho = std::hypot(X, Y);
    if (rho == 0.0) return {0.0, 0.0};
    if (std::abs(Y) <= std::abs(X)) {
        const double x = std::copysign(rho, X);
        return {x, x * std::atan(Y / X) / kQuarterPi};
    }
    const double y = std::copysign(rho, Y);
    return {y * std::atan(X / Y) / kQuarterPi, y};
}

std::size_t lawson_flip(const std::vector<Vec2>& P, std::vector<meshkit::Face>& faces) {
    // edge -> up to two (face, opposite corner) pairs
    struct Side {
        int face = -1;
        int corner = -1;
    };
    std::unordered_map<std::uint64_t, std::array<Side, 2>> edges;
    edges.reserve(faces.size() * 2);
    auto attach = [&](int f) {
        for (int c = 0; c < 3; ++c) {
            auto& e = edges[edge_key(faces[f][(c + 1) % 3], faces[f][(c + 2) % 3])];
            (e[0].face < 0 ? e[0] : e[1]) = {f, c};
        }
    };
    auto detach = [&](int f) {
        for (int c = 0; c < 3; ++c) {
            auto& e = edges[edge_key(faces[f][(c + 1) % 3], faces[f][(c + 2) % 3])];
            if (e[0].face == f) {
                e[0] = e[1];
                e[1] = {};
            } else if (e[1].face == f) {
                e[1] = {};
            }
        }
    };
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) attach(f);

    std::vector<std::uint64_t> stack;
    stack.reserve(edges.size());
    for (const auto& [k, _] : edges) stack.push_back(k);
    std::size_t flips = 0;
    const std::size_t limit = 50 * faces.size() + 100;
    while (!stack.empty()) {
        const std::uint64_t key = stack.back();
        stack.pop_back();
        const auto it = edges.find(key);
        if (it == edges.end() || it->second[1].face < 0) continue;
        const auto [s0, s1] = it->second;
        const auto& f0 = faces[s0.face];
        const auto& f1 = faces[s1.face];
        const int a = f0[(s0.corner + 1) % 3], b = f0[(s0.corner + 2) % 3];
        const int c = f0[s0.corner], d = f1[s1.corner];
        // f0 = (c, a, b) counter-clockwise; d sits across edge ab.
        if (!(incircle(P[c], P[a], P[b], P[d]) > 1e-14)) continue;
        // The flipped pair must stay counter-clockwise (the quad is convex).
        if (!(orient(P[c], P[a], P[d]) > 0.0 && orient(P[d], P[b], P[c]) > 0.0)) continue;
        if (++flips > limit) throw ConvergenceError("lawson_flip: flip budget exhausted");
        const int fa = s0.face, fb = s1.face;
        detach(fa);
        detach(fb);
        edges.erase(key);
        faces[fa] = {c, a, d};
        faces[fb] = {d, b, c};
        attach(fa);
        attach(fb);
        for (auto [u, v] : {std::pair{c, a}, std::pair{a, d}, std::pair{d, b}, std::pair{b, c}})
            stack.push_back(edge_key(u, v));
    }
    return flips;
}

Grid disk_grid(int p) {
    if (p < 2) throw DomainError("disk_grid: need at least 2 points per side");
    Grid g;
    g.points.reserve(static_cast<std::size_t>(p) * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            const double y = -1.0 + 2.0 * i / (p - 1);
            const double x = -1.0 + 2.0 * j / (p - 1);
            g.points.push_back(square_to_disk(x, y));
        }
    auto id = [p](int i, int j) { return i * p + j; };
    g.faces.reserve(2 * static_cast<std::size_t>(p - 1) * (p - 1));
    for (int i = 0; i + 1 < p; ++i)
        for (int j = 0; j + 1 < p; ++j) {
            // Diagonal pointing away from the centre keeps the start near-Delaunay.
            const bool flip = (i < (p - 1) / 2) != (j < (p - 1) / 2);
            const int v00 = id(i, j), v01 = id(i, j + 1), v10 = id(i + 1, j), v11 = id(i + 1, j + 1);
            if (flip) {
                g.faces.push_back({v00, v01, v11});
                g.faces.push_back({v00, v11, v10});
            } else {
                g.faces.push_back({v00, v01, v10});
                g.faces.push_back({v01, v11, v10});
            }
        }
    lawson_flip(g.points, g.faces);
    return g;
}

}  // namespace capharm::diskgrid
