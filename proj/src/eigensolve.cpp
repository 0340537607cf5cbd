#include "capharm/eigensolve.hpp"

#include "capharm/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>

namespace capharm::eigensolve {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sign_of(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

double core(double l, int m, double x_c, const hyperfun::OdeTolerance& tol) {
    return hyperfun::legendre_core(l, m, x_c, tol);
}

}  // namespace

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

Parity parse_parity(const std::string& s) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    throw ConfigError("unknown parity '" + s + "'");
}

EigenTable::EigenTable(double theta_c, Parity parity, int k_max)
    : theta_c_(theta_c), parity_(parity), k_max_(k_max),
      l_(static_cast<std::size_t>(k_max + 1) * (k_max + 2) / 2, kNaN) {}

bool EigenTable::contains(int m, int k) const {
    return m >= 0 && k <= k_max_ && m <= k && in_parity_set(parity_, m, k) && !std::isnan(l_[index(m, k)]);
}

double EigenTable::degree(int m, int k) const {
    if (!contains(m, k))
        throw EigenTableMismatch("no " + to_string(parity_) + " degree for (m=" + std::to_string(m) +
                                 ", k=" + std::to_string(k) + ") in table with k_max=" + std::to_string(k_max_));
    return l_[index(m, k)];
}

void EigenTable::set(int m, int k, double l) {
    if (m < 0 || m > k || k > k_max_ || !in_parity_set(parity_, m, k))
        throw EigenTableMismatch("slot (m=" + std::to_string(m) + ", k=" + std::to_string(k) +
                                 ") is not part of this table");
    l_[index(m, k)] = l;
}

std::size_t EigenTable::count() const {
    return static_cast<std::size_t>(std::count_if(l_.begin(), l_.end(), [](double v) { return !std::isnan(v); }));
}

std::vector<std::tuple<int, int, double>> EigenTable::entries() const {
    std::vector<std::tuple<int, int, double>> out;
    for (int m = 0; m <= k_max_; ++m)
        for (int k = m; k <= k_max_; ++k)
            if (contains(m, k)) out.emplace_back(m, k, l_[index(m, k)]);
    return out;
}

EigenTable EigenTable::truncated(int k_max) const {
    EigenTable t(theta_c_, parity_, std::min(k_max, k_max_));
    for (const auto& [m, k, l] : entries())
        if (k <= t.k_max_) t.set(m, k, l);
    return t;
}

bool EigenTable::operator==(const EigenTable& o) const {
    if (theta_c_ != o.theta_c_ || parity_ != o.parity_ || k_max_ != o.k_max_) return false;
    for (std::size_t i = 0; i < l_.size(); ++i) {
        const bool a = std::isnan(l_[i]), b = std::isnan(o.l_[i]);
        if (a != b || (!a && l_[i] != o.l_[i])) return false;
    }
    return true;
}

double boundary_residual_even(double l, int m, double x_c, const hyperfun::OdeTolerance& tol) {
    const double f = core(l, m, x_c, tol);
    const double fm1 = core(l - 1.0, m, x_c, tol);
    return l * x_c * f - (l - m) * fm1;
}

double boundary_residual_odd(double l, int m, double x_c, const hyperfun::OdeTolerance& tol) {
    return core(l, m, x_c, tol);
}

double scaled_residual(Parity parity, double l, int m, double x_c, const hyperfun::OdeTolerance& tol) {
    const double f = core(l, m, x_c, tol);
    const double fm1 = core(l - 1.0, m, x_c, tol);
    const double mag = std::abs(f) + std::abs(fm1);
    if (parity == Parity::Odd) return mag > 0 ? f / mag : f;
    const double r = l * x_c * f - (l - m) * fm1;
    const double den = std::max(l, 1.0) * mag;
    return den > 0 ? r / den : r;
}

double scan_step(double theta_c) { return std::min(0.1, theta_c / kPi); }

double asymptotic_degree(double theta_c, int k) { return kPi / (2.0 * theta_c) * (k + 0.5) - 0.5; }

namespace {

class RootFinder {
public:
    RootFinder(Parity parity, int m, double x_c, const SolveOptions& opt)
        : parity_(parity), m_(m), x_c_(x_c), opt_(opt) {}

    double scan_eval(double l) const { return scaled_residual(parity_, l, m_, x_c_, hyperfun::kScanTolerance); }
    double tight_eval(double l) const { return scaled_residual(parity_, l, m_, x_c_, hyperfun::kTightTolerance); }

    // Safeguarded Mueller iteration inside a sign-change bracket.
    double polish(double lo, double hi) const {
        double flo = tight_eval(lo), fhi = tight_eval(hi);
        if (std::abs(flo) < opt_.root_tol) return lo;
        if (std::abs(fhi) < opt_.root_tol) return hi;
        if (sign_of(flo) == sign_of(fhi)) {
            // Scan and tight evaluations disagree on the sign at an end point;
            // the root sits within the scan noise of that end.
            return std::abs(flo) < std::abs(fhi) ? lo : hi;
        }
        double x0 = lo, x1 = hi, x2 = 0.5 * (lo + hi);
        double f0 = flo, f1 = fhi, f2 = tight_eval(x2);
        if (std::abs(f2) < opt_.root_tol) return x2;
        if (sign_of(f2) == sign_of(flo)) {
            lo = x2;
            flo = f2;
        } else {
            hi = x2;
        }
        double width_before = hi - lo;
        for (int it = 0; it < opt_.mueller_max_iter; ++it) {
            double x3;
            const double h1 = x1 - x0, h2 = x2 - x1;
            const double d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
            const double a = (d2 - d1) / (h2 + h1);
            const double b = a * h2 + d2;
            const double disc = b * b - 4.0 * a * f2;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                const double den = std::abs(b + sq) > std::abs(b - sq) ? b + sq : b - sq;
                x3 = den != 0.0 ? x2 - 2.0 * f2 / den : 0.5 * (lo + hi);
            } else {
                x3 = d2 != 0.0 ? x2 - f2 / d2 : 0.5 * (lo + hi);
            }
            // Fall back to bisection when the step leaves the bracket or the
            // bracket is not shrinking fast enough.
            if (!(x3 > lo && x3 < hi) || (it % 4 == 3 && hi - lo > 0.5 * width_before)) x3 = 0.5 * (lo + hi);
            if (it % 4 == 3) width_before = hi - lo;
            const double f3 = tight_eval(x3);
            if (std::abs(f3) < opt_.root_tol) return x3;
            if (sign_of(f3) == sign_of(flo)) {
                lo = x3;
                flo = f3;
            } else {
                hi = x3;
            }
            if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x3))) return x3;
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = f2;
            x2 = x3;
            f2 = f3;
        }
        throw NoConvergence("Mueller polishing did not reach the root tolerance for m=" + std::to_string(m_) +
                            " in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }

private:
    Parity parity_;
    int m_;
    double x_c_;
    SolveOptions opt_;
};

}  // namespace

OrderSolution solve_order(double theta_c, Parity parity, int m, int k_max, const SolveOptions& opt,
                          bool record_scan) {
    hyperfun::check_theta_c(theta_c);
    if (k_max < 0 || k_max > 60) throw DomainError("k_max must lie in [0, 60]");
    if (m < 0 || m > k_max) throw DomainError("order m out of range");

    OrderSolution sol;
    sol.m = m;
    for (int k = m; k <= k_max; ++k)
        if (in_parity_set(parity, m, k)) sol.k.push_back(k);
    if (sol.k.empty()) return sol;

    const double x_c = std::cos(theta_c);
    const double dl = scan_step(theta_c);
    const RootFinder rf(parity, m, x_c, opt);
    std::vector<double> roots;
    std::size_t needed = sol.k.size();

    double l0 = m;
    if (parity == Parity::Even && m == 0) {
        roots.push_back(0.0);  // constant mode; the residual vanishes identically at l = 0
        l0 = dl;
    }

    const auto add_root = [&](double l) {
        if (!roots.empty() && std::abs(l - roots.back()) < opt.dup_tol) return;
        roots.push_back(l);
    };

    const double l_budget = 2.0 * asymptotic_degree(theta_c, k_max + 1) + m + 20.0;
    double l_prev = l0;
    double r_prev = rf.scan_eval(l_prev);
    if (record_scan) sol.scan.push_back({l_prev, r_prev});
    if (std::abs(r_prev) < opt.root_tol) add_root(l_prev);
    double l_pp = l_prev, r_pp = std::numeric_limits<double>::infinity();

    long step = 0;
    while (roots.size() < needed) {
        const double l = l0 + (++step) * dl;
        if (l > l_budget) {
            throw RootMissed("m=" + std::to_string(m) + ": found " + std::to_string(roots.size()) + " of " +
                             std::to_string(needed) + " roots (next k=" + std::to_string(sol.k[roots.size()]) +
                             ") before the scan budget l=" + std::to_string(l_budget) + "; last bracket [" +
                             std::to_string(l_prev) + ", " + std::to_string(l) + "]");
        }
        const double r = rf.scan_eval(l);
        if (record_scan) sol.scan.push_back({l, r});

        if (r == 0.0) {
            add_root(l);
        } else if (r_prev != 0.0 && sign_of(r) != sign_of(r_prev)) {
            add_root(rf.polish(l_prev, l));
        } else if (std::abs(r_prev) < opt.dip_threshold && std::abs(r_prev) < std::abs(r_pp) &&
                   std::abs(r_prev) < std::abs(r) && sign_of(r_pp) == sign_of(r)) {
            // Tangency guard: |r| dipped towards zero without a sign change,
            // so look for a pair of close roots on a finer grid.
            const double fine = dl / 100.0;
            double a = l_pp, fa = r_pp;
            for (int i = 1; i <= 200 && roots.size() < needed; ++i) {
                const double b = l_pp + i * fine;
                if (b > l) break;
                const double fb = rf.scan_eval(b);
                if (record_scan) sol.scan.push_back({b, fb});
                if (fb == 0.0)
                    add_root(b);
                else if (fa != 0.0 && sign_of(fa) != sign_of(fb))
                    add_root(rf.polish(a, b));
                a = b;
                fa = fb;
            }
            std::sort(roots.begin(), roots.end());
        }
        l_pp = l_prev;
        r_pp = r_prev;
        l_prev = l;
        r_prev = r;
    }
    roots.resize(needed);
    sol.l = roots;
    if (record_scan)
        std::sort(sol.scan.begin(), sol.scan.end(), [](const ScanSample& a, const ScanSample& b) { return a.l < b.l; });
    return sol;
}

EigenTable solve_eigentable(double theta_c, Parity parity, int k_max, const SolveOptions& opt) {
    hyperfun::check_theta_c(theta_c);
    if (k_max < 0 || k_max > 60) throw DomainError("k_max must lie in [0, 60]");
    EigenTable table(theta_c, parity, k_max);
    std::vector<OrderSolution> sols(k_max + 1);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int m = k_max; m >= 0; --m) {
        try {
            sols[m] = solve_order(theta_c, parity, m, k_max, opt);
        } catch (...) {
#pragma omp critical(capharm_eigen_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (const auto& s : sols)
        for (std::size_t i = 0; i < s.k.size(); ++i) table.set(s.m, s.k[i], s.l[i]);
    return table;
}

EigenDiagnostics dump_eigen_diagnostics(double theta_c, Parity parity, int k_max, const SolveOptions& opt) {
    EigenDiagnostics d;
    d.theta_c = theta_c;
    d.parity = parity;
    d.k_max = k_max;
    d.table = EigenTable(theta_c, parity, k_max);
    d.orders.resize(k_max + 1);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (int m = k_max; m >= 0; --m) {
        try {
            d.orders[m] = solve_order(theta_c, parity, m, k_max, opt, true);
        } catch (...) {
#pragma omp critical(capharm_eigen_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (const auto& s : d.orders) {
        d.plateau_end.push_back(s.l.empty() ? 0.0 : s.l.front());
        for (std::size_t i = 0; i < s.k.size(); ++i) d.table.set(s.m, s.k[i], s.l[i]);
    }
    return d;
}

std::string EigenDiagnostics::to_tsv() const {
    std::ostringstream os;
    char buf[128];
    os << "# capharm eigen diagnostics\ttheta_c=" << theta_c << "\tparity=" << to_string(parity)
       << "\tk_max=" << k_max << "\n";
    os << "# record\tm\tl_or_k\tvalue\n";
    for (const auto& s : orders)
        for (const auto& smp : s.scan) {
            const double lg = std::max(-300.0, std::log10(std::max(std::abs(smp.residual), 1e-300)));
            std::snprintf(buf, sizeof buf, "scan\t%d\t%.10g\t%.6f\n", s.m, smp.l, lg);
            os << buf;
        }
    for (const auto& s : orders)
        for (std::size_t i = 0; i < s.k.size(); ++i) {
            std::snprintf(buf, sizeof buf, "root\t%d\t%d\t%.17g\n", s.m, s.k[i], s.l[i]);
            os << buf;
        }
    for (std::size_t m = 0; m < plateau_end.size(); ++m) {
        std::snprintf(buf, sizeof buf, "plateau\t%zu\t%.17g\n", m, plateau_end[m]);
        os << buf;
    }
    for (int m = 0; m <= k_max; ++m)
        for (int k = 0; k <= k_max; ++k) {
            const double l = table.contains(m, k) ? table.degree(m, k) : 0.0;
            std::snprintf(buf, sizeof buf, "table\t%d\t%d\t%.17g\n", m, k, l);
            os << buf;
        }
    return os.str();
}

}  // namespace capharm::eigensolve
