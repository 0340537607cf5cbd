#include "capharm/error.hpp"
#include "capharm/harmonics.hpp"

#include "util.hpp"

#include <json.hpp>

namespace capharm::harmonics {

namespace {
constexpr const char* kFormat = "capharm-coefficients";
constexpr int kVersion = 1;
}  // namespace

std::string to_json(const SchCoefficients& c) {
    nlohmann::ordered_json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["theta_c"] = c.theta_c;
    j["k_max"] = c.k_max;
    j["parity"] = "even";
    j["centroid"] = {c.centroid.x(), c.centroid.y(), c.centroid.z()};
    auto rows = nlohmann::ordered_json::array();
    for (Eigen::Index r = 0; r < c.q.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (int ch = 0; ch < 3; ++ch) {
            row.push_back(c.q(r, ch).real());
            row.push_back(c.q(r, ch).imag());
        }
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

SchCoefficients coefficients_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("coefficients: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormat) throw ParseError("coefficients: unknown format tag");
        if (j.at("version").get<int>() != kVersion) throw ParseError("coefficients: unsupported version");
        if (j.at("parity").get<std::string>() != "even") throw ParseError("coefficients: only the even set is stored");
        const int k_max = j.at("k_max").get<int>();
        if (k_max < 0 || k_max > 200) throw ParseError("coefficients: k_max out of range");
        SchCoefficients c(j.at("theta_c").get<double>(), k_max);
        const auto& cen = j.at("centroid");
        if (cen.size() != 3) throw ParseError("coefficients: centroid must have 3 entries");
        c.centroid = Vec3(cen[0].get<double>(), cen[1].get<double>(), cen[2].get<double>());
        const auto& rows = j.at("rows");
        if (static_cast<Eigen::Index>(rows.size()) != c.q.rows())
            throw ParseError("coefficients: expected " + std::to_string(c.q.rows()) + " rows, got " +
                             std::to_string(rows.size()));
        for (Eigen::Index r = 0; r < c.q.rows(); ++r) {
            const auto& row = rows[static_cast<std::size_t>(r)];
            if (row.size() != 6) throw ParseError("coefficients: row " + std::to_string(r) + " must have 6 numbers");
            for (int ch = 0; ch < 3; ++ch)
                c.q(r, ch) = {row[2 * ch].get<double>(), row[2 * ch + 1].get<double>()};
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("coefficients: ") + e.what());
    }
}

void save_coefficients(const SchCoefficients& c, const std::filesystem::path& path) {
    detail::write_file_atomic(path, to_json(c));
}

SchCoefficients load_coefficients(const std::filesystem::path& path) {
    return coefficients_from_json(detail::read_file(path));
}

}  // namespace capharm::harmonics
