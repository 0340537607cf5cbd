#include "capharm/capmap.hpp"
#include "capharm/error.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace capharm::capmap {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cot(const Vec3& apex, const Vec3& p, const Vec3& q) {
    const Vec3 u = p - apex, v = q - apex;
    return u.dot(v) / std::max(u.cross(v).norm(), 1e-300);
}

double angle_at(const Vec3& apex, const Vec3& p, const Vec3& q) {
    const Vec3 u = p - apex, v = q - apex;
    return std::atan2(u.cross(v).norm(), u.dot(v));
}

// Symmetric cotangent Laplacian, positive semi-definite: L_ii = sum_j w_ij, L_ij = -w_ij.
SpMat cotangent_laplacian(const TriMesh& mesh) {
    std::vector<Triplet> t;
    t.reserve(mesh.faces.size() * 12);
    const auto& V = mesh.vertices;
    for (const auto& f : mesh.faces) {
        for (int c = 0; c < 3; ++c) {
            const int i = f[c], j = f[(c + 1) % 3], k = f[(c + 2) % 3];
            const double w = 0.5 * cot(V[i], V[j], V[k]);  // weight of edge (j, k)
            t.emplace_back(j, k, -w);
            t.emplace_back(k, j, -w);
            t.emplace_back(j, j, w);
            t.emplace_back(k, k, w);
        }
    }
    SpMat L(static_cast<Eigen::Index>(V.size()), static_cast<Eigen::Index>(V.size()));
    L.setFromTriplets(t.begin(), t.end());
    return L;
}

// Floater's mean-value weights; rows are not symmetric.
SpMat mean_value_laplacian(const TriMesh& mesh) {
    std::vector<Triplet> t;
    t.reserve(mesh.faces.size() * 12);
    const auto& V = mesh.vertices;
    for (const auto& f : mesh.faces) {
        for (int c = 0; c < 3; ++c) {
            const int i = f[c], j = f[(c + 1) % 3], k = f[(c + 2) % 3];
            const double h = std::tan(0.5 * angle_at(V[i], V[j], V[k]));
            const double wj = h / std::max((V[j] - V[i]).norm(), 1e-300);
            const double wk = h / std::max((V[k] - V[i]).norm(), 1e-300);
            t.emplace_back(i, j, -wj);
            t.emplace_back(i, k, -wk);
            t.emplace_back(i, i, wj + wk);
        }
    }
    SpMat L(static_cast<Eigen::Index>(V.size()), static_cast<Eigen::Index>(V.size()));
    L.setFromTriplets(t.begin(), t.end());
    return L;
}

struct Partition {
    std::vector<int> loop;
    std::vector<int> slot;  // vertex -> interior index, or -1 - boundary position
    int n_interior = 0;
};

Partition partition(const TriMesh& mesh) {
    Partition p;
    p.loop = meshkit::boundary_loop(mesh);
    p.slot.assign(mesh.vertices.size(), 0);
    for (std::size_t b = 0; b < p.loop.size(); ++b) p.slot[p.loop[b]] = -1 - static_cast<int>(b);
    for (auto& s : p.slot)
        if (s == 0) s = p.n_interior++;
    return p;
}

// Dirichlet solve for the interior given boundary positions.
class HarmonicSolver {
public:
    HarmonicSolver(const SpMat& L, const Partition& part, bool symmetric) : part_(part) {
        const int ni = part.n_interior;
        std::vector<Triplet> tii, tib;
        for (int col = 0; col < L.outerSize(); ++col)
            for (SpMat::InnerIterator it(L, col); it; ++it) {
                const int r = part.slot[it.row()];
                if (r < 0) continue;
                const int c = part.slot[it.col()];
                if (c >= 0)
                    tii.emplace_back(r, c, it.value());
                else
                    tib.emplace_back(r, -1 - c, it.value());
            }
        Lii_.resize(ni, ni);
        Lii_.setFromTriplets(tii.begin(), tii.end());
        Lib_.resize(ni, static_cast<Eigen::Index>(part.loop.size()));
        Lib_.setFromTriplets(tib.begin(), tib.end());
        if (ni == 0) {
            ok_ = true;
            return;
        }
        if (symmetric) {
            ldlt_.emplace(Lii_);
            ok_ = ldlt_->info() == Eigen::Success && (ldlt_->vectorD().array() > 0.0).all();
        } else {
            lu_.emplace();
            lu_->analyzePattern(Lii_);
            lu_->factorize(Lii_);
            ok_ = lu_->info() == Eigen::Success;
        }
    }

    bool ok() const { return ok_; }

    std::vector<Vec2> solve(const Eigen::VectorXd& bx, const Eigen::VectorXd& by) const {
        std::vector<Vec2> uv(part_.slot.size());
        Eigen::VectorXd ix, iy;
        if (part_.n_interior > 0) {
            const Eigen::VectorXd rx = -(Lib_ * bx), ry = -(Lib_ * by);
            ix = ldlt_ ? Eigen::VectorXd(ldlt_->solve(rx)) : Eigen::VectorXd(lu_->solve(rx));
            iy = ldlt_ ? Eigen::VectorXd(ldlt_->solve(ry)) : Eigen::VectorXd(lu_->solve(ry));
        }
        for (std::size_t v = 0; v < uv.size(); ++v) {
            const int s = part_.slot[v];
            uv[v] = s >= 0 ? Vec2(ix[s], iy[s]) : Vec2(bx[-1 - s], by[-1 - s]);
        }
        return uv;
    }

private:
    const Partition& part_;
    SpMat Lii_, Lib_;
    std::optional<Eigen::SimplicialLDLT<SpMat>> ldlt_;
    std::optional<Eigen::SparseLU<SpMat>> lu_;
    bool ok_ = false;
};

std::vector<double> arc_length_angles(const TriMesh& mesh, const std::vector<int>& loop) {
    const std::size_t n = loop.size();
    std::vector<double> t(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += (mesh.vertices[loop[(i + 1) % n]] - mesh.vertices[loop[i]]).norm();
        if (i + 1 < n) t[i + 1] = total;
    }
    for (auto& x : t) x *= kTwoPi / total;
    return t;
}

double dirichlet_energy(const SpMat& L, const std::vector<Vec2>& uv, Eigen::VectorXd& gx,
                        Eigen::VectorXd& gy) {
    const Eigen::Index n = static_cast<Eigen::Index>(uv.size());
    Eigen::VectorXd x(n), y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = uv[i].x();
        y[i] = uv[i].y();
    }
    gx = L * x;
    gy = L * y;
    return 0.5 * (x.dot(gx) + y.dot(gy));
}

// Area of the boundary polygon with vertices on the unit circle at angles t.
double polygon_area(const std::vector<double>& t) {
    const std::size_t n = t.size();
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = t[(i + 1) % n] - t[i];
        if (i + 1 == n) d += kTwoPi;
        a += std::sin(d);
    }
    return 0.5 * a;
}

bool ordered(const std::vector<double>& t) {
    const std::size_t n = t.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(t[i + 1] > t[i])) return false;
    return t[n - 1] - t[0] < kTwoPi;
}

// Removes the components along {1, cos t, sin t}: the infinitesimal Möbius
// motions of the circle, which leave the conformal energy unchanged.
void project_out_mobius(std::vector<double>& p, const std::vector<double>& t) {
    const std::size_t n = t.size();
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d b(1.0, std::cos(t[i]), std::sin(t[i]));
        G += b * b.transpose();
        r += b * p[i];
    }
    const Eigen::Vector3d c = G.ldlt().solve(r);
    for (std::size_t i = 0; i < n; ++i) p[i] -= c[0] + c[1] * std::cos(t[i]) + c[2] * std::sin(t[i]);
}

}  // namespace

std::size_t count_folds(const TriMesh& mesh, const std::vector<Vec2>& uv) {
    std::size_t n = 0;
    for (const auto& f : mesh.faces) {
        const Vec2 a = uv[f[1]] - uv[f[0]], b = uv[f[2]] - uv[f[0]];
        if (!(a.x() * b.y() - a.y() * b.x() > 0.0)) ++n;
    }
    return n;
}

DiskParam disk_conformal_map(const TriMesh& mesh, const DiskMapOptions& opt) {
    const auto diag = meshkit::validate_patch(mesh);
    if (diag.boundary_loop_count != 1 || diag.nonmanifold_edge_count > 0 || diag.out_of_range_index_count > 0 ||
        diag.repeated_index_count > 0)
        throw TopologyError("disk_conformal_map: not a single-boundary manifold patch (" +
                            std::to_string(diag.boundary_loop_count) + " boundary loops, " +
                            std::to_string(diag.nonmanifold_edge_count) + " non-manifold edges)");
    const Partition part = partition(mesh);
    const std::size_t nb = part.loop.size();

    std::vector<double> t = arc_length_angles(mesh, part.loop);
    auto boundary = [&](const std::vector<double>& ang, Eigen::VectorXd& bx, Eigen::VectorXd& by) {
        bx.resize(static_cast<Eigen::Index>(nb));
        by.resize(static_cast<Eigen::Index>(nb));
        for (std::size_t i = 0; i < nb; ++i) {
            bx[static_cast<Eigen::Index>(i)] = std::cos(ang[i]);
            by[static_cast<Eigen::Index>(i)] = std::sin(ang[i]);
        }
    };

    DiskParam out;
    const SpMat L = cotangent_laplacian(mesh);
    const HarmonicSolver cotan(L, part, true);
    Eigen::VectorXd bx, by;
    boundary(t, bx, by);
    if (cotan.ok()) {
        out.uv = cotan.solve(bx, by);
        out.method = "cotangent";
    }
    if (!cotan.ok() || count_folds(mesh, out.uv) > 0) {
        const HarmonicSolver mv(mean_value_laplacian(mesh), part, false);
        if (!mv.ok()) throw ConvergenceError("disk_conformal_map: mean-value system is singular");
        out.uv = mv.solve(bx, by);
        out.method = "mean-value";
        if (const auto folds = count_folds(mesh, out.uv); folds > 0)
            throw ConvergenceError("disk_conformal_map: " + std::to_string(folds) +
                                   " folded faces after mean-value fallback");
        Eigen::VectorXd gx, gy;
        out.residual = dirichlet_energy(L, out.uv, gx, gy) - polygon_area(t);
        return out;
    }

    // Boundary refinement: Jacobi-scaled descent on E_C(t) = E_D(u(t)) - A(t).
    Eigen::VectorXd gx, gy;
    double energy = dirichlet_energy(L, out.uv, gx, gy) - polygon_area(t);
    double step = 1.0;
    int it = 0;
    for (; it < opt.max_refine_iterations; ++it) {
        std::vector<double> p(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            const int v = part.loop[i];
            const double c = std::cos(t[i]), s = std::sin(t[i]);
            const double dprev = i == 0 ? t[0] - t[nb - 1] + kTwoPi : t[i] - t[i - 1];
            const double dnext = i + 1 == nb ? t[0] + kTwoPi - t[i] : t[i + 1] - t[i];
            const double dA = 0.5 * (std::cos(dprev) - std::cos(dnext));
            const double g = -gx[v] * s + gy[v] * c - dA;
            p[i] = g / std::max(L.coeff(v, v), 1e-300);
        }
        project_out_mobius(p, t);

        bool accepted = false;
        double trial_energy = energy;
        std::vector<Vec2> trial_uv;
        std::vector<double> trial(nb);
        for (int half = 0; half < 30 && !accepted; ++half, step *= 0.5) {
            for (std::size_t i = 0; i < nb; ++i) trial[i] = t[i] - step * p[i];
            if (!ordered(trial)) continue;
            boundary(trial, bx, by);
            trial_uv = cotan.solve(bx, by);
            Eigen::VectorXd tx, ty;
            trial_energy = dirichlet_energy(L, trial_uv, tx, ty) - polygon_area(trial);
            if (trial_energy < energy && count_folds(mesh, trial_uv) == 0) {
                accepted = true;
                gx = std::move(tx);
                gy = std::move(ty);
            }
        }
        if (!accepted) break;
        const double decrease = energy - trial_energy;
        t = trial;
        out.uv = std::move(trial_uv);
        energy = trial_energy;
        step = std::min(1.0, step * 4.0);  // undo the last halving, then grow
        if (decrease < opt.refine_tol * std::numbers::pi) {
            ++it;
            break;
        }
    }
    out.iterations = it;
    out.residual = energy;
    return out;
}

}  // namespace capharm::capmap
