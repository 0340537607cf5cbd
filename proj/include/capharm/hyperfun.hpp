#pragma once

#include <span>
#include <vector>

namespace capharm::hyperfun {

/// Lanczos approximation (g = 7, 9 terms), with reflection for x < 0.5.
double gamma(double x);
/// log|Γ(x)|.
double lgamma(double x);

enum class Hyp2f1Method { Taylor, Ode };

struct OdeTolerance {
    // Error is measured against the local phase-plane amplitude of (F, F'),
    // so the absolute part stays meaningful when F decays to tiny values.
    // These are per-step targets; the accumulated error is ~100x larger.
    double abs = 1e-13;
    double rel = 1e-12;
};

/// Tighter setting used while polishing eigenvalues.
inline constexpr OdeTolerance kTightTolerance{1e-14, 1e-13};
/// Looser setting for sign scans, where only the sign away from roots matters.
inline constexpr OdeTolerance kScanTolerance{1e-10, 1e-9};

struct Hyp2f1Value {
    double value;
    double derivative;  // dF/dz
    Hyp2f1Method method;
};

/// Gauss hypergeometric 2F1(a, b; c; z) for real arguments and z in [0, 1).
/// Tries the Taylor series first and falls back to Dormand-Prince integration
/// of the hypergeometric equation.
double hyp2f1(double a, double b, double c, double z, const OdeTolerance& tol = {});
Hyp2f1Value hyp2f1_full(double a, double b, double c, double z, const OdeTolerance& tol = {});

/// Same function evaluated at many points with one integration sweep.
/// `z` may be in any order; results follow the input order.
std::vector<double> hyp2f1_many(double a, double b, double c, std::span<const double> z,
                                const OdeTolerance& tol = {});

/// Forced single-path evaluations; mostly for cross-checking the two methods.
/// hyp2f1_taylor throws NoConvergence if the series does not settle.
Hyp2f1Value hyp2f1_taylor(double a, double b, double c, double z);
Hyp2f1Value hyp2f1_ode(double a, double b, double c, double z, const OdeTolerance& tol = {});

struct OdeSample {
    double z, f, df;
};
/// Dense record of the integrator's accepted steps from z0 up to z_end.
std::vector<OdeSample> hyp2f1_ode_trace(double a, double b, double c, double z_end,
                                        const OdeTolerance& tol = {});

/// F(l, m, x) = 2F1(m - l, m + l + 1; m + 1; (1 - x) / 2).
double legendre_core(double l, int m, double x, const OdeTolerance& tol = {});

/// Associated Legendre function of fractional degree:
/// 1/(2^m m!) * Γ(l+m+1)/Γ(l-m+1) * (1-x^2)^(m/2) * F(l, m, x).
double alf(double l, int m, double x);

struct NormFactor {
    double value = 1.0;
    double p = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double ratio_factor = 1.0;
    bool exact_fallback = false;  // sectoral l == m case, see normalized_alf
};

/// Haines' asymptotic Schmidt semi-normalisation K^m_l. Throws DomainError
/// when m >= 1 and l <= m.
NormFactor norm_factor(double l, int m);
/// log of norm_factor(l, m).value without overflow.
double log_norm_factor(double l, int m);

/// K^m_l * (1-x^2)^(m/2) * F(l, m, x). For the sectoral degree l == m
/// (m >= 1), where the asymptotic factor is singular, the exact Schmidt
/// factor sqrt(2 Γ(l+m+1)/Γ(l-m+1)) / (2^m m!) is used instead.
double normalized_alf(double l, int m, double x);

/// normalized_alf at many x with one hypergeometric sweep.
std::vector<double> normalized_alf_many(double l, int m, std::span<const double> x);

/// log of the factor used by normalized_alf, including the sectoral fallback.
double log_schmidt_factor(double l, int m);

/// Smallest and largest cap half-angle the toolkit accepts.
inline constexpr double kThetaCMin = 3.14159265358979323846 / 36.0;
inline constexpr double kThetaCMax = 5.0 * 3.14159265358979323846 / 6.0;
/// Throws DomainError when theta_c is outside [kThetaCMin, kThetaCMax].
void check_theta_c(double theta_c);

}  // namespace capharm::hyperfun
