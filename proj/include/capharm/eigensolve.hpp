#pragma once

#include "capharm/hyperfun.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace capharm::eigensolve {

/// Even = Neumann boundary condition (k - m even), odd = Dirichlet (k - m odd).
enum class Parity { Even, Odd };

std::string to_string(Parity p);
Parity parse_parity(const std::string& s);

/// True when slot (m, k) belongs to the parity set.
inline bool in_parity_set(Parity p, int m, int k) {
    return m >= 0 && m <= k && ((k - m) % 2 == (p == Parity::Even ? 0 : 1));
}

/// Degrees l(m)_k for one cap half-angle and parity set. Only slots of the
/// table's own parity are populated; other slots report absent.
class EigenTable {
public:
    EigenTable() = default;
    EigenTable(double theta_c, Parity parity, int k_max);

    double theta_c() const { return theta_c_; }
    Parity parity() const { return parity_; }
    int k_max() const { return k_max_; }

    bool contains(int m, int k) const;
    /// Throws EigenTableMismatch for an absent slot.
    double degree(int m, int k) const;
    void set(int m, int k, double l);

    /// Number of populated slots.
    std::size_t count() const;
    /// (m, k, l) sorted by m then k.
    std::vector<std::tuple<int, int, double>> entries() const;
    /// Copy restricted to k <= k_max.
    EigenTable truncated(int k_max) const;

    bool operator==(const EigenTable& other) const;

private:
    static std::size_t index(int m, int k) { return static_cast<std::size_t>(k) * (k + 1) / 2 + m; }
    double theta_c_ = 0.0;
    Parity parity_ = Parity::Even;
    int k_max_ = -1;
    std::vector<double> l_;  // NaN marks absent slots
};

struct SolveOptions {
    double root_tol = 1e-10;  // on the scaled residual
    double dup_tol = 1e-6;
    int mueller_max_iter = 60;
    double dip_threshold = 1e-4;  // tangency guard
};

/// Raw even residual l x_c F(l) - (l - m) F(l - 1).
double boundary_residual_even(double l, int m, double x_c,
                              const hyperfun::OdeTolerance& tol = {});
/// Raw odd residual F(l).
double boundary_residual_odd(double l, int m, double x_c, const hyperfun::OdeTolerance& tol = {});

/// Residual divided by the magnitude of its terms, so the root tolerance has
/// the same meaning for every (l, m). Same sign as the raw residual.
double scaled_residual(Parity parity, double l, int m, double x_c,
                       const hyperfun::OdeTolerance& tol = {});

/// Scan step used by the solver: min(0.1, theta_c / pi).
double scan_step(double theta_c);

/// Asymptotic degree (pi / (2 theta_c)) (k + 1/2) - 1/2.
double asymptotic_degree(double theta_c, int k);

struct ScanSample {
    double l;
    double residual;  // scaled
};

struct OrderSolution {
    int m = 0;
    std::vector<int> k;
    std::vector<double> l;
    std::vector<ScanSample> scan;  // filled only when requested
};

/// Degrees for a single order m, k = m..k_max within the parity set.
OrderSolution solve_order(double theta_c, Parity parity, int m, int k_max, const SolveOptions& opt = {},
                          bool record_scan = false);

/// All orders 0..k_max. Parallel over m when OpenMP is available.
EigenTable solve_eigentable(double theta_c, Parity parity, int k_max, const SolveOptions& opt = {});

/// Cache file name for (theta_c, parity) inside `dir`.
std::filesystem::path cache_path(double theta_c, Parity parity, const std::filesystem::path& dir);
void cache_eigentable(const EigenTable& table, const std::filesystem::path& dir);
/// Returns the cached table truncated to k_max, or nothing when the cache is
/// missing or was built for a smaller k_max. Throws ChecksumMismatch when the
/// file is corrupted.
std::optional<EigenTable> load_cached(double theta_c, Parity parity, int k_max,
                                      const std::filesystem::path& dir);

std::string serialize(const EigenTable& table);
EigenTable deserialize(const std::string& text);

/// Cache directory from $CAPHARM_CACHE_DIR, if set.
std::optional<std::filesystem::path> default_cache_dir();

/// Loads from the cache when possible, otherwise solves and stores.
EigenTable get_eigentable(double theta_c, Parity parity, int k_max,
                          const std::optional<std::filesystem::path>& cache_dir = default_cache_dir());

struct EigenDiagnostics {
    double theta_c = 0.0;
    Parity parity = Parity::Even;
    int k_max = 0;
    std::vector<OrderSolution> orders;  // with scan samples
    std::vector<double> plateau_end;    // smallest root per m
    EigenTable table;

    /// Tab-separated records: "scan m l log10|r|", "root m k l",
    /// "plateau m l", and the full "table m k l" grid with 0 for absent slots.
    std::string to_tsv() const;
};

EigenDiagnostics dump_eigen_diagnostics(double theta_c, Parity parity, int k_max,
                                        const SolveOptions& opt = {});

}  // namespace capharm::eigensolve
