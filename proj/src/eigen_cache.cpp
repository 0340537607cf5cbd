#include "capharm/eigensolve.hpp"

#include "capharm/error.hpp"
#include "util.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace capharm::eigensolve {

namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kMagic = "capharm-eigentable";

long long theta_key(double theta_c) { return std::llround(theta_c * 1e12); }

std::string body_of(const EigenTable& t) {
    std::string body;
    char buf[96];
    for (const auto& [m, k, l] : t.entries()) {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", m, k, l);
        body += buf;
    }
    return body;
}

std::string header_of(double theta_c, Parity parity, int k_max) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %d\ntheta_c %.17g\nparity %s\nk_max %d\n", kMagic, kFormatVersion, theta_c,
                  to_string(parity).c_str(), k_max);
    return buf;
}

}  // namespace

std::string serialize(const EigenTable& t) {
    const std::string head = header_of(t.theta_c(), t.parity(), t.k_max());
    const std::string body = body_of(t);
    char sum[64];
    std::snprintf(sum, sizeof sum, "checksum %016" PRIx64 "\n", detail::fnv1a(body, detail::fnv1a(head)));
    return head + sum + body;
}

EigenTable deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string magic, key, parity_s;
    int version = 0, k_max = -1;
    double theta_c = 0.0;
    std::string checksum;
    if (!(in >> magic >> version) || magic != kMagic) throw ChecksumMismatch("not an eigen table cache file");
    if (version != kFormatVersion) throw ChecksumMismatch("unsupported eigen table format version");
    if (!(in >> key >> theta_c) || key != "theta_c" || !(in >> key >> parity_s) || key != "parity" ||
        !(in >> key >> k_max) || key != "k_max" || !(in >> key >> checksum) || key != "checksum")
        throw ChecksumMismatch("malformed eigen table header");
    in.ignore(1);  // newline after checksum
    const std::string body(std::istreambuf_iterator<char>(in), {});
    const Parity parity = parse_parity(parity_s);
    if (k_max < 0 || k_max > 60) throw ChecksumMismatch("eigen table header has invalid k_max");

    char sum[32];
    std::snprintf(sum, sizeof sum, "%016" PRIx64,
                  detail::fnv1a(body, detail::fnv1a(header_of(theta_c, parity, k_max))));
    if (checksum != sum) throw ChecksumMismatch("eigen table checksum does not match its contents");

    EigenTable t(theta_c, parity, k_max);
    std::istringstream bs(body);
    int m, k;
    double l;
    while (bs >> m >> k >> l) t.set(m, k, l);
    return t;
}

fs::path cache_path(double theta_c, Parity parity, const fs::path& dir) {
    return dir / ("eig_" + to_string(parity) + "_" + std::to_string(theta_key(theta_c)) + "e-12.txt");
}

void cache_eigentable(const EigenTable& table, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create cache directory '" + dir.string() + "'");
    detail::write_file_atomic(cache_path(table.theta_c(), table.parity(), dir), serialize(table));
}

std::optional<EigenTable> load_cached(double theta_c, Parity parity, int k_max, const fs::path& dir) {
    const auto path = cache_path(theta_c, parity, dir);
    if (!fs::exists(path)) return std::nullopt;
    EigenTable t = deserialize(detail::read_file(path));
    if (theta_key(t.theta_c()) != theta_key(theta_c) || t.parity() != parity)
        throw ChecksumMismatch("cache file '" + path.string() + "' holds a different table");
    if (t.k_max() < k_max) return std::nullopt;
    return t.k_max() == k_max ? t : t.truncated(k_max);
}

std::optional<fs::path> default_cache_dir() {
    const char* env = std::getenv("CAPHARM_CACHE_DIR");
    if (env && *env) return fs::path(env);
    return std::nullopt;
}

EigenTable get_eigentable(double theta_c, Parity parity, int k_max, const std::optional<fs::path>& cache_dir) {
    if (cache_dir) {
        try {
            if (auto t = load_cached(theta_c, parity, k_max, *cache_dir)) return *t;
        } catch (const ChecksumMismatch&) {
            // Fall through and overwrite the damaged file.
        }
    }
    EigenTable t = solve_eigentable(theta_c, parity, k_max);
    if (cache_dir) cache_eigentable(t, *cache_dir);
    return t;
}

}  // namespace capharm::eigensolve
