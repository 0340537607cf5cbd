#include <doctest.h>

#include "cli.hpp"

#include "capharm/harmonics.hpp"
#include "capharm/meshkit.hpp"

#include <json.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "capharm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = capharm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "capharm_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("patch, analyze and reconstruct round trip") {
    const auto dir = scratch();
    const auto mesh = (dir / "para.obj").string();
    REQUIRE(run({"patch", "--kind", "paraboloid-cap", "-o", mesh}).code == 0);
    const auto an = run({"analyze", "-i", mesh, "-o", (dir / "an").string(), "--kmax", "6", "--json"});
    REQUIRE(an.code == 0);
    const auto rec = nlohmann::json::parse(an.out);
    CHECK(rec["schema"] == capharm::cli::kSchemaVersion);
    CHECK(rec["command"] == "analyze");
    CHECK(rec["c"].get<double>() < 1e-9);
    for (const char* f : {"cap.txt", "coefficients.json", "spectrum.tsv"}) CHECK(fs::exists(dir / "an" / f));
    CHECK(capharm::harmonics::load_coefficients(dir / "an" / "coefficients.json").k_max == 6);

    const auto out = dir / "rec.obj";
    const auto re = run({"reconstruct", "-i", (dir / "an" / "coefficients.json").string(), "-o", out.string(),
                         "--sweep", "2,6", "--dome-n", "20"});
    CHECK(re.code == 0);
    CHECK(fs::exists(dir / "rec_k2.obj"));
    CHECK(capharm::meshkit::load_mesh(dir / "rec_k6.obj").vertex_count() > 0);

    // Reconstructing at the fitted points with the source faces.
    const auto at = run({"reconstruct", "-i", (dir / "an" / "coefficients.json").string(), "-o",
                         (dir / "at.obj").string(), "--cap", (dir / "an" / "cap.txt").string(), "--faces-from", mesh});
    CHECK(at.code == 0);
    CHECK(capharm::meshkit::load_mesh(dir / "at.obj").face_count() ==
          capharm::meshkit::load_mesh(mesh).face_count());
}

TEST_CASE("exit codes by error category") {
    const auto dir = scratch();
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"analyze", "-i", (dir / "missing.obj").string(), "-o", (dir / "x").string()}).code == 2);
    CHECK(run({"dome", "--dome-n", "3", "-o", (dir / "d.obj").string()}).code == 1);
    CHECK(run({"eigen", "--theta-c", "0", "--kmax", "2"}).code == 5);

    const auto bad = run({"analyze", "-i", (dir / "missing.obj").string(), "-o", (dir / "x").string(), "--json"});
    const auto rec = nlohmann::json::parse(bad.out);
    CHECK(rec["error"]["category"] == "io");
    CHECK(rec["error"]["exit_code"] == 2);
}

TEST_CASE("project reports band masses and rejects a half-angle mismatch") {
    const auto dir = scratch();
    const auto src = (dir / "src.obj").string(), donor = (dir / "donor.obj").string();
    REQUIRE(run({"fractal", "--resolution", "40", "--rms", "0.01", "-o", src}).code == 0);
    REQUIRE(run({"patch", "--kind", "plane-disk", "--resolution", "32", "-o", donor}).code == 0);
    REQUIRE(run({"analyze", "-i", src, "-o", (dir / "fa").string(), "--kmax", "8"}).code == 0);
    const auto coeffs = (dir / "fa" / "coefficients.json").string();

    const auto ok = run({"project", "-i", coeffs, "--donor", donor, "-o", (dir / "pr.obj").string(), "--window", "3",
                         "8", "--json"});
    REQUIRE(ok.code == 0);
    const auto rec = nlohmann::json::parse(ok.out);
    CHECK(rec["in_band"].get<double>() > 0);
    CHECK(rec["out_in_ratio"].get<double>() < 0.05);

    const auto empty = run({"project", "-i", coeffs, "--donor", donor, "-o", (dir / "pe.obj").string(), "--window",
                            "8", "3"});
    CHECK(empty.code == 0);
    CHECK(capharm::meshkit::load_mesh(dir / "pe.obj").vertices == capharm::meshkit::load_mesh(donor).vertices);

    const auto mis = run({"project", "-i", coeffs, "--donor", donor, "-o", (dir / "pm.obj").string(), "--window",
                          "3", "8", "--theta-c", "0.5"});
    CHECK(mis.code == 1);
    CHECK(mis.err.find("re-analyze") != std::string::npos);
}

TEST_CASE("eigen reports cache state") {
    const auto dir = scratch() / "cache";
    fs::remove_all(dir);
    const auto first = run({"eigen", "--kmax", "4", "--theta-c", "0.3", "--cache-dir", dir.string(), "--json"});
    CHECK(nlohmann::json::parse(first.out)["cache"] == "miss");
    const auto second = run({"eigen", "--kmax", "4", "--theta-c", "0.3", "--cache-dir", dir.string(), "--json"});
    CHECK(nlohmann::json::parse(second.out)["cache"] == "hit");
}
