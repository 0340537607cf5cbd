#include "cli.hpp"

#include "capharm/capmap.hpp"
#include "capharm/eigensolve.hpp"
#include "capharm/error.hpp"
#include "capharm/harmonics.hpp"
#include "capharm/meshkit.hpp"
#include "capharm/spectra.hpp"
#include "capharm/surfgen.hpp"

#include "util.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace capharm::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using eigensolve::Parity;

constexpr double kDefaultThetaC = std::numbers::pi / 18;
constexpr int kDefaultKmax = 20;

struct Global {
    bool json = false;
    bool strict = false;
    std::string cache_dir;
};

std::optional<fs::path> cache_dir(const Global& g) {
    if (!g.cache_dir.empty()) return fs::path(g.cache_dir);
    return eigensolve::default_cache_dir();
}

const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return "config";
        case ErrorCategory::Io: return "io";
        case ErrorCategory::Topology: return "topology";
        case ErrorCategory::Convergence: return "convergence";
        case ErrorCategory::NumericalDomain: return "numerical-domain";
    }
    return "unknown";
}

// Summary on stdout: one JSON record or one text line of key=value pairs.
void emit(std::ostream& out, const Global& g, json rec) {
    if (g.json) {
        json wrapped;
        wrapped["schema"] = kSchemaVersion;
        for (auto& [k, v] : rec.items()) wrapped[k] = v;
        out << wrapped.dump() << '\n';
        return;
    }
    bool first = true;
    for (auto& [k, v] : rec.items()) {
        out << (first ? "" : " ") << k << '=';
        if (v.is_string())
            out << v.get<std::string>();
        else if (v.is_number_float())
            out << detail::fmt_g17(v.get<double>());
        else
            out << v.dump();
        first = false;
    }
    out << '\n';
}

void warn(std::ostream& err, const std::string& kind, const std::string& msg) {
    err << "warning[" << kind << "]: " << msg << '\n';
}

meshkit::MeshFormat out_format(const std::string& name, const fs::path& path) {
    const auto f = meshkit::parse_mesh_format(name);
    return f == meshkit::MeshFormat::Auto ? meshkit::format_from_extension(path) : f;
}

double nan_if(bool undefined, double v) { return undefined ? std::nan("") : v; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string input, output, format = "auto", channel = "z";
    double theta_c = kDefaultThetaC;
    std::vector<double> theta_search;
    int kmax = kDefaultKmax;
    std::vector<int> fit_range;
    std::uint64_t seed = 10;
};

int cmd_analyze(const AnalyzeArgs& a, const Global& g, std::ostream& out, std::ostream& err) {
    if (a.kmax < 2) throw ConfigError("--kmax must be at least 2 for a spectrum");
    int lo = 2, hi = a.kmax;
    if (!a.fit_range.empty()) {
        lo = a.fit_range[0];
        hi = a.fit_range[1];
    }
    if (lo < 2 || hi > a.kmax || hi - lo < 2)
        throw ConfigError("--fit-range must lie within [2, kmax] and span at least three degrees");
    const auto channel = spectra::parse_hurst_channel(a.channel);
    const auto mesh = meshkit::load_mesh(a.input, meshkit::parse_mesh_format(a.format), g.strict);

    capmap::SearchBudget budget;
    budget.seed = a.seed;
    double theta_c = a.theta_c;
    capmap::CapResult res;
    if (!a.theta_search.empty()) {
        auto ts = capmap::optimize_theta_c(mesh, a.theta_search[0], a.theta_search[1], budget);
        theta_c = ts.theta_c;
        res = std::move(ts.best);
    } else {
        res = capmap::parameterize_to_cap(mesh, theta_c, budget);
    }

    const auto eig = eigensolve::get_eigentable(theta_c, Parity::Even, a.kmax, cache_dir(g));
    const auto fr = harmonics::fit_coefficients(mesh, res.cap, eig, a.kmax);
    if (fr.diag.ill_conditioned) {
        const std::string msg = "basis condition number " + detail::fmt_g17(fr.diag.condition);
        if (g.strict) throw DomainError(msg);
        warn(err, "IllConditioned", msg);
    }
    if (fr.diag.undersampled) warn(err, "Undersampled", "fewer than 4 points per basis column");

    auto rep = spectra::descriptors(fr.coeffs);
    bool undefined = false;
    try {
        spectra::fit_hurst(rep, lo, hi, channel);
        if (rep.non_fractal) {
            if (g.strict) throw DomainError("fitted H = " + detail::fmt_g17(rep.hurst) + " lies outside (0, 1)");
            warn(err, "NonFractal", "fitted H = " + detail::fmt_g17(rep.hurst) + " lies outside (0, 1)");
        }
    } catch (const InsufficientPoints& e) {
        if (g.strict) throw;
        undefined = true;
        warn(err, "NonFractal", std::string("H undefined: ") + e.what());
    }
    const auto f = spectra::fdec(fr.coeffs);

    fs::create_directories(a.output);
    const fs::path dir(a.output);
    capmap::save_capparam(res.cap, dir / "cap.txt");
    harmonics::save_coefficients(fr.coeffs, dir / "coefficients.json");
    detail::write_file_atomic(dir / "spectrum.tsv", spectra::report_tsv(rep));

    json r;
    r["command"] = "analyze";
    r["theta_c"] = theta_c;
    r["k_max"] = a.kmax;
    r["H"] = number_or_null(nan_if(undefined, rep.hurst));
    r["FD"] = number_or_null(nan_if(undefined, rep.fd));
    r["fit_range"] = json::array({lo, hi});
    r["channel"] = spectra::to_string(channel);
    r["a"] = f.a;
    r["b"] = f.b;
    r["c"] = f.c;
    r["d_area"] = res.mobius.report.d_area;
    r["d_angle"] = res.mobius.report.d_angle;
    r["condition"] = fr.diag.condition;
    r["output"] = dir.string();
    emit(out, g, r);
    return 0;
}

// ------------------------------------------------------------ reconstruct

struct ReconstructArgs {
    std::string input, output, format = "auto", cap, faces_from;
    std::vector<int> window;
    std::vector<int> sweep;
    int dome_n = 0;
};

fs::path sweep_path(const fs::path& base, int k) {
    return base.parent_path() / (base.stem().string() + "_k" + std::to_string(k) + base.extension().string());
}

int cmd_reconstruct(const ReconstructArgs& a, const Global& g, std::ostream& out, std::ostream& err) {
    const auto coeffs = harmonics::load_coefficients(a.input);
    int lo = 0, hi = coeffs.k_max;
    if (!a.window.empty()) {
        lo = a.window[0];
        hi = a.window[1];
    }
    if (lo < 0 || hi > coeffs.k_max || lo > hi)
        throw ConfigError("--window must satisfy 0 <= min <= max <= " + std::to_string(coeffs.k_max));
    for (int k : a.sweep)
        if (k < lo || k > coeffs.k_max) throw ConfigError("--sweep value " + std::to_string(k) + " is out of range");
    if (a.cap.empty() != a.faces_from.empty()) throw ConfigError("--cap and --faces-from go together");
    const auto eig = eigensolve::get_eigentable(coeffs.theta_c, Parity::Even, coeffs.k_max, cache_dir(g));

    meshkit::TriMesh base;
    std::vector<double> theta, phi;
    int dome_n = a.dome_n;
    if (!a.cap.empty()) {
        const auto cap = capmap::load_capparam(a.cap);
        base = meshkit::load_mesh(a.faces_from);
        if (cap.size() != base.vertices.size()) throw ConfigError("--cap and --faces-from disagree on vertex count");
        theta = cap.theta;
        phi = cap.phi;
    } else {
        if (dome_n == 0) {
            try {
                const auto f = spectra::fdec(coeffs);
                dome_n = harmonics::choose_dome_resolution(spectra::wavelengths(f, std::max(hi, 1))[std::max(hi, 1)],
                                                           spectra::fdec_circumference(f));
            } catch (const DegenerateFdec&) {
                dome_n = 60;
                warn(err, "DegenerateFdec", "no k = 1 content, using dome resolution 60");
            }
        }
        auto dome = harmonics::make_dome(coeffs.theta_c, dome_n);
        base = std::move(dome.mesh);
        theta = std::move(dome.theta);
        phi = std::move(dome.phi);
    }

    std::vector<std::pair<int, fs::path>> jobs;
    if (a.sweep.empty())
        jobs.emplace_back(hi, fs::path(a.output));
    else
        for (int k : a.sweep) jobs.emplace_back(k, sweep_path(a.output, k));
    std::vector<meshkit::TriMesh> meshes;
    for (const auto& [k, path] : jobs) {
        meshkit::TriMesh m = base;
        m.vertices = harmonics::reconstruct(coeffs, eig, theta, phi, lo, k);
        meshes.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i)
        meshkit::save_mesh(meshes[i], jobs[i].second, out_format(a.format, jobs[i].second));

    json r;
    r["command"] = "reconstruct";
    r["theta_c"] = coeffs.theta_c;
    r["window"] = json::array({lo, hi});
    r["dome_n"] = a.cap.empty() ? dome_n : 0;
    r["vertices"] = base.vertices.size();
    r["faces"] = base.faces.size();
    r["meshes"] = jobs.size();
    emit(out, g, r);
    return 0;
}

// ---------------------------------------------------------------- project

struct ProjectArgs {
    std::string input, donor, output, mode = "z-only", format = "auto";
    std::vector<int> window;
    double theta_c = 0.0;
    std::uint64_t seed = 10;
};

int cmd_project(const ProjectArgs& a, const Global& g, std::ostream& out, std::ostream& err) {
    const auto src = harmonics::load_coefficients(a.input);
    const auto mode = spectra::parse_projection_mode(a.mode);
    const spectra::SpectralWindow w{a.window[0], a.window[1]};
    const bool empty = w.k_min > w.k_max;
    if (!empty) spectra::check_window(w, src.k_max);
    const auto donor = meshkit::load_mesh(a.donor, meshkit::MeshFormat::Auto, g.strict);
    const double theta_c = a.theta_c > 0.0 ? a.theta_c : src.theta_c;

    capmap::SearchBudget budget;
    budget.seed = a.seed;
    const auto cap = capmap::parameterize_to_cap(donor, theta_c, budget).cap;
    meshkit::TriMesh result = donor;
    spectra::BandMass mass;
    if (!empty) {
        const auto eig = eigensolve::get_eigentable(src.theta_c, Parity::Even, src.k_max, cache_dir(g));
        result = spectra::project_roughness(src, w, donor, cap, eig, mode);
        // Refit both meshes on the donor's parameterisation; the difference is
        // the spectrum of what was added.
        auto added = harmonics::fit_coefficients(result, cap, eig, src.k_max).coeffs;
        added.q -= harmonics::fit_coefficients(donor, cap, eig, src.k_max).coeffs.q;
        mass = spectra::band_mass(added, w);
    } else {
        warn(err, "EmptyWindow", "window is empty, donor written unchanged");
    }
    meshkit::save_mesh(result, a.output, out_format(a.format, a.output));

    double rms = 0.0;
    for (std::size_t i = 0; i < donor.vertices.size(); ++i) rms += (result.vertices[i] - donor.vertices[i]).squaredNorm();
    rms = std::sqrt(rms / static_cast<double>(donor.vertices.size()));
    json r;
    r["command"] = "project";
    r["theta_c"] = theta_c;
    r["window"] = json::array({w.k_min, w.k_max});
    r["mode"] = spectra::to_string(mode);
    r["rms_displacement"] = rms;
    r["in_band"] = mass.in_band;
    r["out_band"] = mass.out_band;
    r["out_in_ratio"] = mass.ratio();
    emit(out, g, r);
    return 0;
}

// ------------------------------------------------------------------ eigen

struct EigenArgs {
    double theta_c = kDefaultThetaC;
    int kmax = kDefaultKmax;
    std::string parity = "even", diagnostics;
};

int cmd_eigen(const EigenArgs& a, const Global& g, std::ostream& out, std::ostream&) {
    std::vector<Parity> parities;
    if (a.parity == "both")
        parities = {Parity::Even, Parity::Odd};
    else
        parities = {eigensolve::parse_parity(a.parity)};
    const auto dir = cache_dir(g);
    for (Parity p : parities) {
        const auto t0 = std::chrono::steady_clock::now();
        bool hit = false;
        if (dir) {
            try {
                hit = eigensolve::load_cached(a.theta_c, p, a.kmax, *dir).has_value();
            } catch (const ChecksumMismatch&) {
                hit = false;
            }
        }
        const auto table = eigensolve::get_eigentable(a.theta_c, p, a.kmax, dir);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!a.diagnostics.empty()) {
            fs::path path(a.diagnostics);
            if (parities.size() > 1)
                path = path.parent_path() /
                       (path.stem().string() + "_" + eigensolve::to_string(p) + path.extension().string());
            detail::write_file_atomic(path, eigensolve::dump_eigen_diagnostics(a.theta_c, p, a.kmax).to_tsv());
        }
        json r;
        r["command"] = "eigen";
        r["theta_c"] = a.theta_c;
        r["parity"] = eigensolve::to_string(p);
        r["k_max"] = a.kmax;
        r["cache"] = dir ? (hit ? "hit" : "miss") : "off";
        r["seconds"] = secs;
        r["degrees"] = table.count();
        emit(out, g, r);
    }
    return 0;
}

// ------------------------------------------------------ generators, checks

struct DomeArgs {
    double theta_c = kDefaultThetaC;
    int dome_n = 60;
    std::string output, format = "auto";
};

int cmd_dome(const DomeArgs& a, const Global& g, std::ostream& out, std::ostream&) {
    const auto dome = harmonics::make_dome(a.theta_c, a.dome_n);
    meshkit::save_mesh(dome.mesh, a.output, out_format(a.format, a.output));
    json r;
    r["command"] = "dome";
    r["theta_c"] = a.theta_c;
    r["dome_n"] = a.dome_n;
    r["vertices"] = dome.mesh.vertices.size();
    r["faces"] = dome.mesh.faces.size();
    emit(out, g, r);
    return 0;
}

struct FractalArgs {
    surfgen::FractalSpec spec;
    std::string output, format = "auto";
};

int cmd_fractal(const FractalArgs& a, const Global& g, std::ostream& out, std::ostream&) {
    const auto mesh = surfgen::gen_fractal_disk(a.spec);
    meshkit::save_mesh(mesh, a.output, out_format(a.format, a.output));
    json r;
    r["command"] = "fractal";
    r["hurst"] = a.spec.hurst;
    r["rms"] = a.spec.rms;
    r["radius"] = a.spec.radius;
    r["resolution"] = a.spec.resolution;
    r["seed"] = a.spec.seed;
    r["vertices"] = mesh.vertices.size();
    emit(out, g, r);
    return 0;
}

struct PatchArgs {
    std::string kind, output, format = "auto";
    surfgen::PatchParams params;
    std::vector<double> abc;
};

int cmd_patch(PatchArgs a, const Global& g, std::ostream& out, std::ostream&) {
    const auto kind = surfgen::parse_patch_kind(a.kind);
    if (!a.abc.empty()) {
        a.params.a = a.abc[0];
        a.params.b = a.abc[1];
        a.params.c = a.abc[2];
    }
    const auto mesh = surfgen::gen_analytic_patch(kind, a.params);
    meshkit::save_mesh(mesh, a.output, out_format(a.format, a.output));
    json r;
    r["command"] = "patch";
    r["kind"] = surfgen::to_string(kind);
    r["vertices"] = mesh.vertices.size();
    r["faces"] = mesh.faces.size();
    emit(out, g, r);
    return 0;
}

int cmd_validate(const std::string& input, const Global& g, std::ostream& out, std::ostream& err) {
    const auto mesh = meshkit::load_mesh(input);
    const auto d = meshkit::validate_patch(mesh);
    json r;
    r["command"] = "validate";
    r["valid"] = d.is_valid_patch();
    r["vertices"] = d.vertex_count;
    r["faces"] = d.face_count;
    r["boundary_loops"] = d.boundary_loop_count;
    r["nonmanifold_edges"] = d.nonmanifold_edge_count;
    r["duplicate_faces"] = d.duplicate_face_count;
    r["min_face_area"] = d.min_face_area;
    emit(out, g, r);
    for (const auto& p : d.problems()) err << "problem: " << p << '\n';
    return d.is_valid_patch() ? 0 : static_cast<int>(ErrorCategory::Topology);
}

void add_mesh_format(CLI::App* sub, std::string& target) {
    sub->add_option("--format", target, "Mesh format: obj, stl, stl-ascii, stl-binary or auto")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"capharm: spherical cap harmonic analysis of open surface patches"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_flag("--json", g.json, "Print the summary as one JSON record");
    app.add_flag("--strict", g.strict, "Treat mesh defects and fit warnings as errors");
    app.add_option("--cache-dir", g.cache_dir, "Eigenvalue cache directory (default: $CAPHARM_CACHE_DIR)");

    AnalyzeArgs an;
    auto* s_an = app.add_subcommand("analyze", "Parameterise, fit and analyse a patch");
    s_an->add_option("--input,-i", an.input, "Input mesh")->required();
    s_an->add_option("--output,-o", an.output, "Output directory for cap.txt, coefficients.json, spectrum.tsv")
        ->required();
    auto* tc = s_an->add_option("--theta-c", an.theta_c, "Cap half-angle in radians")->capture_default_str();
    s_an->add_option("--theta-c-search", an.theta_search, "Search the half-angle in [LB, UB]")
        ->expected(2)
        ->excludes(tc);
    s_an->add_option("--kmax", an.kmax, "Maximum degree index")->capture_default_str();
    s_an->add_option("--fit-range", an.fit_range, "Hurst fit range MIN MAX (default 2 kmax)")->expected(2);
    s_an->add_option("--hurst-channel", an.channel, "Descriptor for the Hurst fit: z or total")->capture_default_str();
    s_an->add_option("--seed", an.seed, "Optimiser seed")->capture_default_str();
    add_mesh_format(s_an, an.format);

    ReconstructArgs re;
    auto* s_re = app.add_subcommand("reconstruct", "Evaluate coefficients on a dome or on given cap points");
    s_re->add_option("--input,-i", re.input, "Coefficient file")->required();
    s_re->add_option("--output,-o", re.output, "Output mesh")->required();
    s_re->add_option("--window", re.window, "Degree range MIN MAX (default 0 kmax)")->expected(2);
    s_re->add_option("--sweep", re.sweep, "Write one mesh per upper degree, suffixed _k<K>")->delimiter(',');
    s_re->add_option("--dome-n", re.dome_n, "Dome grid resolution (default from the FDEC wavelength)");
    s_re->add_option("--cap", re.cap, "Cap parameterisation to evaluate at instead of a dome");
    s_re->add_option("--faces-from", re.faces_from, "Mesh whose faces go with --cap");
    add_mesh_format(s_re, re.format);

    ProjectArgs pr;
    auto* s_pr = app.add_subcommand("project", "Add band-limited roughness from coefficients to a donor patch");
    s_pr->add_option("--input,-i", pr.input, "Source coefficient file")->required();
    s_pr->add_option("--donor", pr.donor, "Donor mesh patch")->required();
    s_pr->add_option("--output,-o", pr.output, "Output mesh")->required();
    s_pr->add_option("--window", pr.window, "Degree window MIN MAX; MIN > MAX is empty")->expected(2)->required();
    s_pr->add_option("--mode", pr.mode, "z-only or full-3d")->capture_default_str();
    s_pr->add_option("--theta-c", pr.theta_c, "Donor half-angle (default: the source's)");
    s_pr->add_option("--seed", pr.seed, "Optimiser seed")->capture_default_str();
    add_mesh_format(s_pr, pr.format);

    EigenArgs ei;
    auto* s_ei = app.add_subcommand("eigen", "Solve and cache fractional degrees");
    s_ei->add_option("--theta-c", ei.theta_c, "Cap half-angle in radians")->capture_default_str();
    s_ei->add_option("--kmax", ei.kmax, "Maximum degree index")->capture_default_str();
    s_ei->add_option("--parity", ei.parity, "even, odd or both")->capture_default_str();
    s_ei->add_option("--diagnostics", ei.diagnostics, "Write the scan diagnostics table here");

    DomeArgs dm;
    auto* s_dm = app.add_subcommand("dome", "Write a geodesic dome");
    s_dm->add_option("--theta-c", dm.theta_c, "Cap half-angle in radians")->capture_default_str();
    s_dm->add_option("--dome-n", dm.dome_n, "Grid resolution n (n/2 points per side)")->capture_default_str();
    s_dm->add_option("--output,-o", dm.output, "Output mesh")->required();
    add_mesh_format(s_dm, dm.format);

    FractalArgs fr;
    auto* s_fr = app.add_subcommand("fractal", "Generate a self-affine disk");
    s_fr->add_option("--hurst", fr.spec.hurst, "Hurst exponent in (0, 1)")->capture_default_str();
    s_fr->add_option("--rms", fr.spec.rms, "Height RMS")->capture_default_str();
    s_fr->add_option("--radius", fr.spec.radius, "Disk radius")->capture_default_str();
    s_fr->add_option("--resolution", fr.spec.resolution, "Grid points per side")->capture_default_str();
    s_fr->add_option("--seed", fr.spec.seed, "Generator seed")->capture_default_str();
    s_fr->add_option("--output,-o", fr.output, "Output mesh")->required();
    add_mesh_format(s_fr, fr.format);

    PatchArgs pa;
    auto* s_pa = app.add_subcommand("patch", "Generate an analytic test patch");
    s_pa->add_option("--kind", pa.kind, "plane-disk, paraboloid-cap, sphere-cap or ellipsoid-cap")->required();
    s_pa->add_option("--resolution", pa.params.resolution, "Grid points per side")->capture_default_str();
    s_pa->add_option("--radius", pa.params.radius, "Footprint radius")->capture_default_str();
    s_pa->add_option("--depth", pa.params.depth, "Paraboloid depth")->capture_default_str();
    s_pa->add_option("--theta-c", pa.params.theta_c, "Cap half-angle")->capture_default_str();
    s_pa->add_option("--abc", pa.abc, "Ellipsoid semi-axes")->expected(3);
    s_pa->add_option("--output,-o", pa.output, "Output mesh")->required();
    add_mesh_format(s_pa, pa.format);

    std::string va_input;
    auto* s_va = app.add_subcommand("validate", "Check that a mesh is a single-boundary manifold patch");
    s_va->add_option("--input,-i", va_input, "Input mesh")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorCategory::Config);
    }

    try {
        if (*s_an) return cmd_analyze(an, g, out, err);
        if (*s_re) return cmd_reconstruct(re, g, out, err);
        if (*s_pr) return cmd_project(pr, g, out, err);
        if (*s_ei) return cmd_eigen(ei, g, out, err);
        if (*s_dm) return cmd_dome(dm, g, out, err);
        if (*s_fr) return cmd_fractal(fr, g, out, err);
        if (*s_pa) return cmd_patch(pa, g, out, err);
        if (*s_va) return cmd_validate(va_input, g, out, err);
    } catch (const Error& e) {
        std::string msg = e.what();
        if (e.kind() == "ThetaCMismatch" && msg.find("re-analyze") == std::string::npos)
            msg += "; re-analyze the source at the donor's theta_c";
        err << "error[" << category_name(e.category()) << "/" << e.kind() << "]: " << msg << '\n';
        if (g.json) {
            json r;
            r["schema"] = kSchemaVersion;
            r["error"] = {{"category", category_name(e.category())},
                          {"kind", e.kind()},
                          {"message", msg},
                          {"exit_code", e.exit_code()}};
            out << r.dump() << '\n';
        }
        return e.exit_code();
    } catch (const fs::filesystem_error& e) {
        err << "error[io/FilesystemError]: " << e.what() << '\n';
        return static_cast<int>(ErrorCategory::Io);
    }
    return static_cast<int>(ErrorCategory::Config);
}

}  // namespace capharm::cli
