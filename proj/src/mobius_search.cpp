#include "capharm/capmap.hpp"
#include "capharm/error.hpp"
#include "capharm/hyperfun.hpp"
#include "capharm/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

namespace capharm::capmap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxLogitModulus = 2.5;  // tanh(2.5) = 0.987
constexpr double kThetaTieTol = 1e-4;

// d_area as a function of the Möbius centre, with everything that does not
// depend on it precomputed.
class AreaObjective {
public:
    AreaObjective(const TriMesh& mesh, const DiskParam& d, double theta_c)
        : faces_(mesh.faces), r_(cap_disk_radius(theta_c)) {
        w_.reserve(d.uv.size());
        for (const auto& p : d.uv) w_.emplace_back(p.x(), p.y());
        log_a0_.resize(faces_.size());
        double s0 = 0.0;
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            const auto& F = faces_[f];
            log_a0_[f] = meshkit::triangle_area(mesh.vertices[F[0]], mesh.vertices[F[1]], mesh.vertices[F[2]]);
            if (!(log_a0_[f] > 0.0)) throw DegenerateFace("optimize_mobius: face " + std::to_string(f) + " has zero area");
            s0 += log_a0_[f];
        }
        for (auto& a : log_a0_) a = std::log(a / s0);
    }

    double operator()(const MobiusCoeff& c) const {
        if (!c.valid()) return kInf;
        std::vector<Vec3> P(w_.size());
        for (std::size_t i = 0; i < w_.size(); ++i) {
            const auto h = mobius(c, r_, w_[i]);
            P[i] = inv_stereographic({h.real(), h.imag()});
        }
        std::vector<double> a1(faces_.size());
        double s1 = 0.0;
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            const auto& F = faces_[f];
            a1[f] = 0.5 * (P[F[1]] - P[F[0]]).cross(P[F[2]] - P[F[0]]).norm();
            if (!(a1[f] > 0.0)) return kInf;
            s1 += a1[f];
        }
        const double ls1 = std::log(s1);
        double sum = 0.0;
        for (std::size_t f = 0; f < faces_.size(); ++f) sum += std::abs(std::log(a1[f]) - ls1 - log_a0_[f]);
        return sum / static_cast<double>(faces_.size());
    }

private:
    const std::vector<meshkit::Face>& faces_;
    double r_;
    std::vector<std::complex<double>> w_;
    std::vector<double> log_a0_;
};

MobiusCoeff decode(double X, double Y) {
    const double mod = std::tanh(X);
    return {mod * std::cos(Y), mod * std::sin(Y)};
}

// Plain Nelder-Mead on R^2; every evaluation goes through `f`.
void nelder_mead(const std::function<double(const std::array<double, 2>&)>& f, std::array<double, 2> x0,
                 double step, int max_evals) {
    using P = std::array<double, 2>;
    std::array<P, 3> s{x0, P{x0[0] + step, x0[1]}, P{x0[0], x0[1] + step}};
    std::array<double, 3> v{};
    int evals = 0;
    for (int i = 0; i < 3; ++i, ++evals) v[i] = f(s[i]);
    auto lerp = [](const P& a, const P& b, double t) { return P{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])}; };
    while (evals < max_evals) {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        const int lo = idx[0], mid = idx[1], hi = idx[2];
        const double size = std::max(std::hypot(s[mid][0] - s[lo][0], s[mid][1] - s[lo][1]),
                                     std::hypot(s[hi][0] - s[lo][0], s[hi][1] - s[lo][1]));
        if (size < 1e-10 || (std::isfinite(v[hi]) && v[hi] - v[lo] <= 1e-13 * std::max(1.0, std::abs(v[lo]))))
            break;
        const P c{0.5 * (s[lo][0] + s[mid][0]), 0.5 * (s[lo][1] + s[mid][1])};
        const P xr = lerp(c, s[hi], -1.0);
        const double fr = f(xr);
        ++evals;
        if (fr < v[lo]) {
            const P xe = lerp(c, s[hi], -2.0);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                s[hi] = xe;
                v[hi] = fe;
            } else {
                s[hi] = xr;
                v[hi] = fr;
            }
        } else if (fr < v[mid]) {
            s[hi] = xr;
            v[hi] = fr;
        } else {
            const bool outside = fr < v[hi];
            const P xc = outside ? lerp(c, xr, 0.5) : lerp(c, s[hi], 0.5);
            const double fc = f(xc);
            ++evals;
            if (fc < (outside ? fr : v[hi])) {
                s[hi] = xc;
                v[hi] = fc;
            } else {
                for (int i : {mid, hi}) {
                    s[i] = lerp(s[lo], s[i], 0.5);
                    v[i] = f(s[i]);
                    ++evals;
                }
            }
        }
    }
}

}  // namespace

MobiusResult optimize_mobius(const TriMesh& mesh, const DiskParam& d, double theta_c, const SearchBudget& budget) {
    hyperfun::check_theta_c(theta_c);
    if (d.uv.size() != mesh.vertices.size())
        throw ConfigError("optimize_mobius: disk map does not match the mesh vertex count");
    const AreaObjective objective(mesh, d, theta_c);

    MobiusResult res;
    double best = objective(MobiusCoeff{});
    res.evaluations = 1;
    MobiusCoeff best_c{};
    double best_X = 0.0, best_Y = 0.0;

    // Sequential sampling: a box in (X, Y) = (atanh |a|, arg a) that starts as
    // the whole domain and is pulled onto the incumbent and shrunk by alpha.
    SplitMix64 rng(budget.seed);
    double cX = 0.5 * kMaxLogitModulus, wX = 0.5 * kMaxLogitModulus;
    double cY = std::numbers::pi, wY = std::numbers::pi;
    const int pop = std::max(budget.population, 1);
    std::vector<std::array<double, 2>> cand(pop);
    std::vector<double> val(pop);
    for (int it = 0; it < budget.iterations; ++it) {
        for (auto& c : cand) {
            c[0] = std::clamp(rng.uniform(cX - wX, cX + wX), 0.0, kMaxLogitModulus);
            c[1] = rng.uniform(cY - wY, cY + wY);
        }
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < pop; ++i) val[i] = objective(decode(cand[i][0], cand[i][1]));
        res.evaluations += pop;
        for (int i = 0; i < pop; ++i)
            if (val[i] < best) {
                best = val[i];
                best_c = decode(cand[i][0], cand[i][1]);
                best_X = cand[i][0];
                best_Y = cand[i][1];
            }
        cX = best_X;
        cY = best_Y;
        wX *= budget.alpha;
        wY *= budget.alpha;
        res.history.push_back(best);
    }

    // Local polish in Cartesian (A, B), which is smooth through the origin.
    if (budget.polish_evaluations > 0) {
        const double step = std::max(0.05 * (1.0 - std::hypot(best_c.A, best_c.B)), 1e-4);
        nelder_mead(
            [&](const std::array<double, 2>& p) {
                const MobiusCoeff c{p[0], p[1]};
                const double v = objective(c);
                ++res.evaluations;
                if (v < best) {
                    best = v;
                    best_c = c;
                }
                return v;
            },
            {best_c.A, best_c.B}, step, budget.polish_evaluations);
        res.history.push_back(best);
    }

    // The reported value goes through cap_from_disk, which rounds differently
    // from the objective; compare on that footing so rounding alone can never
    // make the result worse than the identity.
    const DistortionReport identity = distortion(mesh, cap_from_disk(mesh, d, MobiusCoeff{}, theta_c));
    res.identity_d_area = identity.d_area;
    res.coeff = best_c;
    res.report = distortion(mesh, cap_from_disk(mesh, d, best_c, theta_c));
    if (!(res.report.d_area < identity.d_area)) {
        res.coeff = MobiusCoeff{};
        res.report = identity;
    }
    return res;
}

CapResult parameterize_to_cap(const TriMesh& mesh, const DiskParam& disk, double theta_c,
                              const SearchBudget& budget) {
    CapResult out;
    out.disk = disk;
    out.mobius = optimize_mobius(mesh, disk, theta_c, budget);
    out.cap = cap_from_disk(mesh, disk, out.mobius.coeff, theta_c);
    return out;
}

CapResult parameterize_to_cap(const TriMesh& mesh, double theta_c, const SearchBudget& budget) {
    hyperfun::check_theta_c(theta_c);
    return parameterize_to_cap(mesh, disk_conformal_map(mesh), theta_c, budget);
}

ThetaSearchResult optimize_theta_c(const TriMesh& mesh, double theta_lb, double theta_ub,
                                   const SearchBudget& budget) {
    hyperfun::check_theta_c(theta_lb);
    hyperfun::check_theta_c(theta_ub);
    if (!(theta_lb < theta_ub)) throw DomainError("optimize_theta_c: need theta_lb < theta_ub");
    const DiskParam disk = disk_conformal_map(mesh);

    ThetaSearchResult out;
    std::map<double, MobiusResult> seen;
    auto eval = [&](double th) {
        if (auto it = seen.find(th); it != seen.end()) return it->second.report.d_area;
        auto r = optimize_mobius(mesh, disk, th, budget);
        const double v = r.report.d_area;
        seen.emplace(th, std::move(r));
        out.probes.emplace_back(th, v);
        return v;
    };

    const int n = std::max(budget.theta_grid, 2);
    std::vector<double> grid(n), vals(n);
    for (int i = 0; i < n; ++i) grid[i] = i + 1 == n ? theta_ub : theta_lb + (theta_ub - theta_lb) * i / (n - 1);
    for (int i = 0; i < n; ++i) vals[i] = eval(grid[i]);
    const int ib = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());

    // Golden-section refinement on the two grid cells around the best probe.
    double a = grid[std::max(ib - 1, 0)], b = grid[std::min(ib + 1, n - 1)];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    while (b - a > budget.theta_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = eval(x2);
        }
    }

    double fbest = kInf;
    for (const auto& [th, r] : seen) fbest = std::min(fbest, r.report.d_area);
    for (const auto& [th, r] : seen)  // ascending theta: first hit is the smallest
        if (r.report.d_area <= fbest + kThetaTieTol) {
            out.theta_c = th;
            break;
        }
    out.best.disk = disk;
    out.best.mobius = seen.at(out.theta_c);
    out.best.cap = cap_from_disk(mesh, disk, out.best.mobius.coeff, out.theta_c);
    return out;
}

}  // namespace capharm::capmap
