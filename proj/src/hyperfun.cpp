#include "capharm/hyperfun.hpp"

#include "capharm/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace capharm::hyperfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kLogMax = 709.782712893384;

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr int kTaylorTerms = 500;
constexpr double kTaylorTol = 1e-14;
// Largest tolerated ratio between the biggest series term and the sum.
constexpr double kMaxCancellation = 1e4;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double lanczos_sum(double xm1) {
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (xm1 + i);
    return a;
}

std::string args_str(double a, double b, double c, double z) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ", " +
           std::to_string(z) + ")";
}

void check_args(double a, double b, double c, double z) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(z)))
        throw DomainError("hyp2f1: non-finite argument");
    if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a non-positive integer");
    if (z < 0.0 || z >= 1.0) throw DomainError("hyp2f1: z must lie in [0, 1), got " + std::to_string(z));
}

struct TaylorOutcome {
    Hyp2f1Value v;
    bool converged;
    double cancellation;
};

TaylorOutcome taylor(double a, double b, double c, double z) {
    TaylorOutcome out{{1.0, a * b / c, Hyp2f1Method::Taylor}, true, 1.0};
    if (z == 0.0) return out;
    double term = 1.0, sum = 1.0, dsum = 0.0, maxabs = 1.0;
    bool converged = false;
    for (int n = 0; n < kTaylorTerms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z;
        if (term == 0.0) {  // terminating series
            converged = true;
            break;
        }
        sum += term;
        dsum += (n + 1) * term;
        maxabs = std::max(maxabs, std::abs(term));
        if (maxabs > 1e17) break;  // hopeless cancellation
        const double next_ratio = std::abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2))) * z;
        if (next_ratio < 1.0 &&
            std::abs(term) * next_ratio / (1.0 - next_ratio) <= kTaylorTol * std::abs(sum)) {
            converged = true;
            break;
        }
    }
    out.v.value = sum;
    out.v.derivative = dsum / z;
    out.converged = converged;
    out.cancellation = sum != 0.0 ? maxabs / std::abs(sum) : std::numeric_limits<double>::infinity();
    return out;
}

bool taylor_ok(const TaylorOutcome& t) { return t.converged && t.cancellation <= kMaxCancellation; }

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1c = 71.0 / 57600, e3c = -71.0 / 16695, e4c = 71.0 / 1920, e5c = -17253.0 / 339200,
                 e6c = 22.0 / 525, e7c = -1.0 / 40;

struct State {
    double f, df;
};

class HypOde {
public:
    HypOde(double a, double b, double c, const OdeTolerance& tol)
        : a_(a), b_(b), c_(c), ab_(a * b), s_(a + b + 1.0), tol_(tol) {}

    State rhs(double z, const State& y) const {
        return {y.df, (ab_ * y.f - (c_ - s_ * z) * y.df) / (z * (1.0 - z))};
    }

    double omega(double z) const { return std::sqrt(std::max(std::abs(ab_), 1.0) / (z * (1.0 - z))); }

    // Start point: close enough to 0 that the series is cheap and free of
    // cancellation. z = 0 itself is a regular singular point of the equation.
    double start_point(double z_end) const {
        const double s = 0.25 * std::max(std::abs(c_), 1.0) / (std::abs(ab_) + std::abs(c_) + 1.0);
        return std::min(z_end, s);
    }

    // Integrates from (z, y) to z_end exactly. `record` receives accepted steps.
    template <typename Record>
    State integrate(double z, State y, double z_end, double& h, Record&& record) const {
        if (z_end <= z) return y;
        State k1 = rhs(z, y);
        long steps = 0;
        bool last_rejected = false;
        while (z < z_end) {
            if (++steps > 2000000) throw NoConvergence("hyp2f1 ODE: step budget exhausted");
            bool clipped = false;
            if (z + h >= z_end) {
                h = z_end - z;
                clipped = true;
            }
            if (h <= 1e-15 * std::max(z, 1e-300))
                throw NoConvergence("hyp2f1 ODE: step size underflow at z=" + std::to_string(z));
            State t;
            t = {y.f + h * a21 * k1.f, y.df + h * a21 * k1.df};
            const State k2 = rhs(z + c2 * h, t);
            t = {y.f + h * (a31 * k1.f + a32 * k2.f), y.df + h * (a31 * k1.df + a32 * k2.df)};
            const State k3 = rhs(z + c3 * h, t);
            t = {y.f + h * (a41 * k1.f + a42 * k2.f + a43 * k3.f),
                 y.df + h * (a41 * k1.df + a42 * k2.df + a43 * k3.df)};
            const State k4 = rhs(z + c4 * h, t);
            t = {y.f + h * (a51 * k1.f + a52 * k2.f + a53 * k3.f + a54 * k4.f),
                 y.df + h * (a51 * k1.df + a52 * k2.df + a53 * k3.df + a54 * k4.df)};
            const State k5 = rhs(z + c5 * h, t);
            t = {y.f + h * (a61 * k1.f + a62 * k2.f + a63 * k3.f + a64 * k4.f + a65 * k5.f),
                 y.df + h * (a61 * k1.df + a62 * k2.df + a63 * k3.df + a64 * k4.df + a65 * k5.df)};
            const State k6 = rhs(z + h, t);
            const State ynew{y.f + h * (b1 * k1.f + b3 * k3.f + b4 * k4.f + b5 * k5.f + b6 * k6.f),
                             y.df + h * (b1 * k1.df + b3 * k3.df + b4 * k4.df + b5 * k5.df + b6 * k6.df)};
            const double znew = clipped ? z_end : z + h;
            const State k7 = rhs(znew, ynew);
            const State err{h * (e1c * k1.f + e3c * k3.f + e4c * k4.f + e5c * k5.f + e6c * k6.f + e7c * k7.f),
                            h * (e1c * k1.df + e3c * k3.df + e4c * k4.df + e5c * k5.df + e6c * k6.df + e7c * k7.df)};

            const double w = omega(znew);
            const double g0 = y.df / w, g1 = ynew.df / w;
            const double amp = std::sqrt(std::max(y.f * y.f + g0 * g0, ynew.f * ynew.f + g1 * g1));
            const double sf = tol_.abs * amp + tol_.rel * std::max(std::abs(y.f), std::abs(ynew.f));
            const double sd = tol_.abs * amp * w + tol_.rel * std::max(std::abs(y.df), std::abs(ynew.df));
            const double rf = err.f / sf, rd = err.df / sd;
            const double en = std::sqrt(0.5 * (rf * rf + rd * rd));
            if (!std::isfinite(en)) {
                h *= 0.2;
                last_rejected = true;
                continue;
            }
            if (en <= 1.0) {
                z = znew;
                y = ynew;
                k1 = k7;
                record(z, y);
                double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
                if (last_rejected) fac = std::min(fac, 1.0);
                if (!clipped) h *= fac;
                last_rejected = false;
            } else {
                h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
                last_rejected = true;
            }
        }
        return y;
    }

    double initial_step(double z0, double z_end) const {
        const double h_sing = 0.3 * z0 / std::max(std::abs(c_), 1.0);
        const double h_osc = 0.05 / omega(z0);
        return std::min({h_sing, h_osc, z_end - z0});
    }

private:
    double a_, b_, c_, ab_, s_;
    OdeTolerance tol_;
};

template <typename Record>
Hyp2f1Value ode_path(double a, double b, double c, double z, const OdeTolerance& tol, Record&& record) {
    HypOde ode(a, b, c, tol);
    const double z0 = ode.start_point(z);
    const auto seed = taylor(a, b, c, z0);
    if (!seed.converged) throw NoConvergence("hyp2f1: series seed failed at " + args_str(a, b, c, z0));
    if (z0 >= z) return {seed.v.value, seed.v.derivative, Hyp2f1Method::Ode};
    State y{seed.v.value, seed.v.derivative};
    record(z0, y);
    double h = ode.initial_step(z0, z);
    y = ode.integrate(z0, y, z, h, record);
    return {y.f, y.df, Hyp2f1Method::Ode};
}

}  // namespace

double lgamma(double x) {
    if (is_nonpositive_integer(x)) return std::numeric_limits<double>::infinity();
    if (x < 0.5) return std::log(kPi / std::abs(std::sin(kPi * x))) - lgamma(1.0 - x);
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return kLogSqrt2Pi + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

double gamma(double x) {
    if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at " + std::to_string(x));
    if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma(1.0 - x));
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    if (x > 140.0) {
        const double lg = lgamma(x);
        if (lg > kLogMax) throw OverflowError("gamma: overflow at " + std::to_string(x));
        return std::exp(lg);
    }
    return std::sqrt(2.0 * kPi) * std::pow(t, xm1 + 0.5) * std::exp(-t) * lanczos_sum(xm1);
}

Hyp2f1Value hyp2f1_taylor(double a, double b, double c, double z) {
    check_args(a, b, c, z);
    const auto t = taylor(a, b, c, z);
    if (!t.converged) throw NoConvergence("hyp2f1 series did not converge at " + args_str(a, b, c, z));
    return t.v;
}

Hyp2f1Value hyp2f1_ode(double a, double b, double c, double z, const OdeTolerance& tol) {
    check_args(a, b, c, z);
    return ode_path(a, b, c, z, tol, [](double, const State&) {});
}

std::vector<OdeSample> hyp2f1_ode_trace(double a, double b, double c, double z_end, const OdeTolerance& tol) {
    check_args(a, b, c, z_end);
    std::vector<OdeSample> out;
    ode_path(a, b, c, z_end, tol, [&](double z, const State& y) { out.push_back({z, y.f, y.df}); });
    return out;
}

Hyp2f1Value hyp2f1_full(double a, double b, double c, double z, const OdeTolerance& tol) {
    check_args(a, b, c, z);
    const auto t = taylor(a, b, c, z);
    if (taylor_ok(t)) return t.v;
    return ode_path(a, b, c, z, tol, [](double, const State&) {});
}

double hyp2f1(double a, double b, double c, double z, const OdeTolerance& tol) {
    return hyp2f1_full(a, b, c, z, tol).value;
}

std::vector<double> hyp2f1_many(double a, double b, double c, std::span<const double> z,
                                const OdeTolerance& tol) {
    std::vector<double> out(z.size());
    if (z.empty()) return out;
    for (double zi : z) check_args(a, b, c, zi);
    std::vector<std::size_t> order(z.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return z[i] < z[j]; });
    const double zmax = z[order.back()];

    if (taylor_ok(taylor(a, b, c, zmax))) {
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = taylor(a, b, c, z[i]).v.value;
        return out;
    }

    HypOde ode(a, b, c, tol);
    const double z0 = ode.start_point(zmax);
    const auto seed = taylor(a, b, c, z0);
    if (!seed.converged) throw NoConvergence("hyp2f1: series seed failed at " + args_str(a, b, c, z0));
    State y{seed.v.value, seed.v.derivative};
    double zc = z0;
    double h = ode.initial_step(z0, zmax);
    const auto noop = [](double, const State&) {};
    for (std::size_t idx : order) {
        const double zt = z[idx];
        if (zt <= z0) {
            out[idx] = taylor(a, b, c, zt).v.value;
            continue;
        }
        if (zt - zc <= 1e-12 * zt) {
            out[idx] = y.f + (zt - zc) * y.df;  // repeated point, up to rounding
            continue;
        }
        y = ode.integrate(zc, y, zt, h, noop);
        zc = zt;
        out[idx] = y.f;
    }
    return out;
}

double legendre_core(double l, int m, double x, const OdeTolerance& tol) {
    return hyp2f1(m - l, m + l + 1.0, m + 1.0, 0.5 * (1.0 - x), tol);
}

double alf(double l, int m, double x) {
    if (m < 0) throw DomainError("alf: negative order");
    if (!(x > -1.0 && x <= 1.0)) throw DomainError("alf: x must lie in (-1, 1]");
    if (!std::isfinite(l) || l < 0.0) throw DomainError("alf: degree must be finite and non-negative");
    const double lo = l - m + 1.0;
    if (is_nonpositive_integer(lo)) return 0.0;  // 1/Γ vanishes
    const double log_ratio = lgamma(l + m + 1.0) - lgamma(lo);
    if (log_ratio > kLogMax)
        throw OverflowError("alf: gamma ratio overflows for l=" + std::to_string(l) + ", m=" + std::to_string(m));
    const double sign = (lo < 0.0 && static_cast<long>(std::floor(lo)) % 2 != 0) ? -1.0 : 1.0;
    const double one_minus = 1.0 - x * x;
    if (m > 0 && one_minus <= 0.0) return 0.0;
    const double log_pref = log_ratio - m * std::log(2.0) - lgamma(m + 1.0) +
                            (m > 0 ? 0.5 * m * std::log(one_minus) : 0.0);
    return sign * std::exp(log_pref) * legendre_core(l, m, x);
}

NormFactor norm_factor(double l, int m) {
    NormFactor nf;
    if (m < 0) throw DomainError("norm_factor: negative order");
    if (m == 0) return nf;
    if (!(l > m)) throw DomainError("norm_factor: requires l > m for m >= 1");
    nf.p = (l / m) * (l / m);
    nf.e1 = -(1.0 + 1.0 / nf.p) / (12.0 * m);
    nf.e2 = (1.0 + 3.0 / (nf.p * nf.p) + 4.0 / (nf.p * nf.p * nf.p)) / (360.0 * std::pow(m, 3));
    const double log_rf = 0.5 * m * std::log(nf.p) + nf.e1 + nf.e2;
    const double log_v = log_norm_factor(l, m);
    if (log_v > kLogMax || log_rf > kLogMax)
        throw OverflowError("norm_factor overflows for l=" + std::to_string(l) + ", m=" + std::to_string(m));
    nf.ratio_factor = std::exp(log_rf);
    nf.value = std::exp(log_v);
    return nf;
}

double log_norm_factor(double l, int m) {
    if (m == 0) return 0.0;
    if (m < 0 || !(l > m)) throw DomainError("norm_factor: requires l > m for m >= 1");
    const double p = (l / m) * (l / m);
    const double e1 = -(1.0 + 1.0 / p) / (12.0 * m);
    const double e2 = (1.0 + 3.0 / (p * p) + 4.0 / (p * p * p)) / (360.0 * std::pow(m, 3));
    return 0.5 * m * std::log(p) + e1 + e2 - m * std::log(2.0) - 0.5 * std::log(m * kPi) +
           (0.5 * l + 0.25) * std::log((l + m) / (l - m));
}

double log_schmidt_factor(double l, int m) {
    if (m == 0) return 0.0;
    if (m < 0) throw DomainError("normalized_alf: negative order");
    if (std::abs(l - m) <= 1e-9 * m) {
        const double lm = static_cast<double>(m);
        return 0.5 * (std::log(2.0) + lgamma(2.0 * lm + 1.0)) - m * std::log(2.0) - lgamma(lm + 1.0);
    }
    return log_norm_factor(l, m);
}

double normalized_alf(double l, int m, double x) {
    if (!(x > -1.0 && x <= 1.0)) throw DomainError("normalized_alf: x must lie in (-1, 1]");
    if (!std::isfinite(l) || l < 0.0) throw DomainError("normalized_alf: degree must be finite and non-negative");
    const double logk = log_schmidt_factor(l, m);
    const double one_minus = 1.0 - x * x;
    if (m > 0 && one_minus <= 0.0) return 0.0;
    const double lp = logk + (m > 0 ? 0.5 * m * std::log(one_minus) : 0.0);
    if (lp > kLogMax) throw OverflowError("normalized_alf: prefactor overflows");
    return std::exp(lp) * legendre_core(l, m, x);
}

std::vector<double> normalized_alf_many(double l, int m, std::span<const double> x) {
    if (!std::isfinite(l) || l < 0.0) throw DomainError("normalized_alf: degree must be finite and non-negative");
    const double logk = log_schmidt_factor(l, m);
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > -1.0 && x[i] <= 1.0)) throw DomainError("normalized_alf: x must lie in (-1, 1]");
        z[i] = 0.5 * (1.0 - x[i]);
    }
    auto f = hyp2f1_many(m - l, m + l + 1.0, m + 1.0, z);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double one_minus = (1.0 - x[i]) * (1.0 + x[i]);
        if (m > 0 && one_minus <= 0.0) {
            f[i] = 0.0;
            continue;
        }
        const double lp = logk + (m > 0 ? 0.5 * m * std::log(one_minus) : 0.0);
        if (lp > kLogMax) throw OverflowError("normalized_alf: prefactor overflows");
        f[i] *= std::exp(lp);
    }
    return f;
}

void check_theta_c(double theta_c) {
    if (!std::isfinite(theta_c) || theta_c < kThetaCMin * (1 - 1e-12) || theta_c > kThetaCMax * (1 + 1e-12))
        throw DomainError("theta_c=" + std::to_string(theta_c) + " outside supported range [pi/36, 5pi/6]");
}

}  // namespace capharm::hyperfun
