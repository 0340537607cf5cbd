#include "capharm/error.hpp"
#include "capharm/meshkit.hpp"
#include "util.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <unordered_map>

namespace capharm::meshkit {

namespace fs = std::filesystem;

MeshFormat parse_mesh_format(const std::string& name) {
    if (name == "obj") return MeshFormat::Obj;
    if (name == "stl-ascii") return MeshFormat::StlAscii;
    if (name == "stl-binary" || name == "stl") return MeshFormat::StlBinary;
    if (name == "auto") return MeshFormat::Auto;
    throw ConfigError("unknown mesh format '" + name + "'");
}

std::string to_string(MeshFormat format) {
    switch (format) {
        case MeshFormat::Obj: return "obj";
        case MeshFormat::StlAscii: return "stl-ascii";
        case MeshFormat::StlBinary: return "stl-binary";
        case MeshFormat::Auto: return "auto";
    }
    return "auto";
}

MeshFormat format_from_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".stl") return MeshFormat::StlBinary;
    return MeshFormat::Obj;
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary STL I/O assumes a little-endian host");

double parse_double(const std::string& tok, std::size_t line) {
    double v = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (!tok.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
    return v;
}

TriMesh parse_obj(const std::string& text) {
    TriMesh mesh;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            std::string t[3];
            if (!(ls >> t[0] >> t[1] >> t[2]))
                throw ParseError("line " + std::to_string(lineno) + ": vertex needs 3 coordinates");
            mesh.vertices.emplace_back(parse_double(t[0], lineno), parse_double(t[1], lineno),
                                       parse_double(t[2], lineno));
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                const std::string head = tok.substr(0, tok.find('/'));
                long v = 0;
                auto [p, ec] = std::from_chars(head.data(), head.data() + head.size(), v);
                if (ec != std::errc() || p != head.data() + head.size())
                    throw ParseError("line " + std::to_string(lineno) + ": bad face index '" + tok + "'");
                const long nv = static_cast<long>(mesh.vertices.size());
                long zero_based = v > 0 ? v - 1 : nv + v;
                if (v == 0 || zero_based < 0 || zero_based >= nv)
                    throw ParseError("line " + std::to_string(lineno) + ": face index " +
                                     std::to_string(v) + " out of range (OBJ indices are 1-based)");
                idx.push_back(static_cast<int>(zero_based));
            }
            if (idx.size() < 3)
                throw ParseError("line " + std::to_string(lineno) + ": face needs at least 3 vertices");
            for (std::size_t i = 1; i + 1 < idx.size(); ++i)
                mesh.faces.push_back({idx[0], idx[i], idx[i + 1]});
        }
    }
    return mesh;
}

struct BitKey {
    std::uint32_t x, y, z;
    bool operator==(const BitKey&) const = default;
};
struct BitKeyHash {
    std::size_t operator()(const BitKey& k) const {
        return detail::fnv1a(&k, sizeof k);
    }
};

class Welder {
public:
    int add(float x, float y, float z) {
        const BitKey key{std::bit_cast<std::uint32_t>(x), std::bit_cast<std::uint32_t>(y),
                         std::bit_cast<std::uint32_t>(z)};
        auto [it, inserted] = index_.try_emplace(key, static_cast<int>(mesh.vertices.size()));
        if (inserted) mesh.vertices.emplace_back(x, y, z);
        return it->second;
    }
    TriMesh mesh;

private:
    std::unordered_map<BitKey, int, BitKeyHash> index_;
};

float parse_float(const std::string& tok, std::size_t line) {
    float v = 0.0f;
    const char* b = tok.data();
    const char* e = b + tok.size();
    if (!tok.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ParseError("line " + std::to_string(line) + ": bad number '" + tok + "'");
    return v;
}

TriMesh parse_stl_ascii(const std::string& text) {
    Welder w;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<int> facet;
    bool saw_solid = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "solid") {
            saw_solid = true;
        } else if (tag == "facet") {
            facet.clear();
        } else if (tag == "vertex") {
            std::string t[3];
            if (!(ls >> t[0] >> t[1] >> t[2]))
                throw ParseError("line " + std::to_string(lineno) + ": vertex needs 3 coordinates");
            facet.push_back(w.add(parse_float(t[0], lineno), parse_float(t[1], lineno),
                                  parse_float(t[2], lineno)));
        } else if (tag == "endfacet") {
            if (facet.size() != 3)
                throw ParseError("line " + std::to_string(lineno) + ": facet without 3 vertices");
            w.mesh.faces.push_back({facet[0], facet[1], facet[2]});
        }
    }
    if (!saw_solid) throw ParseError("ASCII STL must start with 'solid'");
    return std::move(w.mesh);
}

TriMesh parse_stl_binary(const std::string& data) {
    if (data.size() < 84) throw ParseError("binary STL shorter than its 84-byte header");
    std::uint32_t n = 0;
    std::memcpy(&n, data.data() + 80, 4);
    if (data.size() != 84 + 50ull * n)
        throw ParseError("binary STL size does not match its facet count");
    Welder w;
    for (std::uint32_t i = 0; i < n; ++i) {
        const char* rec = data.data() + 84 + 50ull * i;
        int idx[3];
        for (int k = 0; k < 3; ++k) {
            float c[3];
            std::memcpy(c, rec + 12 + 12 * k, 12);
            idx[k] = w.add(c[0], c[1], c[2]);
        }
        w.mesh.faces.push_back({idx[0], idx[1], idx[2]});
    }
    return std::move(w.mesh);
}

bool looks_binary_stl(const std::string& data) {
    if (data.size() < 84) return false;
    std::uint32_t n = 0;
    std::memcpy(&n, data.data() + 80, 4);
    return data.size() == 84 + 50ull * n;
}

std::string write_obj(const TriMesh& mesh) {
    std::string out;
    out.reserve(mesh.vertices.size() * 64 + mesh.faces.size() * 24);
    out += "# units " + mesh.units + "\n";
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out += buf;
    }
    for (const auto& f : mesh.faces) {
        std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
        out += buf;
    }
    return out;
}

Eigen::Vector3f facet_normal(const TriMesh& mesh, const Face& f) {
    Vec3 n = (mesh.vertices[f[1]] - mesh.vertices[f[0]]).cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
    const double len = n.norm();
    if (len > 0) n /= len;
    return n.cast<float>();
}

std::string write_stl_ascii(const TriMesh& mesh) {
    std::string out = "solid capharm\n";
    char buf[160];
    for (const auto& f : mesh.faces) {
        const auto n = facet_normal(mesh, f);
        std::snprintf(buf, sizeof buf, "  facet normal %.9g %.9g %.9g\n    outer loop\n", n.x(), n.y(), n.z());
        out += buf;
        for (int i : f) {
            const auto& v = mesh.vertices[i];
            std::snprintf(buf, sizeof buf, "      vertex %.9g %.9g %.9g\n",
                          static_cast<float>(v.x()), static_cast<float>(v.y()), static_cast<float>(v.z()));
            out += buf;
        }
        out += "    endloop\n  endfacet\n";
    }
    out += "endsolid capharm\n";
    return out;
}

std::string write_stl_binary(const TriMesh& mesh) {
    std::string out(84 + 50 * mesh.faces.size(), '\0');
    const char header[] = "capharm binary STL";
    std::memcpy(out.data(), header, sizeof header - 1);
    const auto n = static_cast<std::uint32_t>(mesh.faces.size());
    std::memcpy(out.data() + 80, &n, 4);
    for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
        char* rec = out.data() + 84 + 50 * i;
        const auto nrm = facet_normal(mesh, mesh.faces[i]);
        std::memcpy(rec, nrm.data(), 12);
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector3f v = mesh.vertices[mesh.faces[i][k]].cast<float>();
            std::memcpy(rec + 12 + 12 * k, v.data(), 12);
        }
    }
    return out;
}

}  // namespace

TriMesh load_mesh(const fs::path& path, MeshFormat format, bool strict) {
    const std::string data = detail::read_file(path);
    if (format == MeshFormat::Auto) {
        std::string ext = path.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".obj")
            format = MeshFormat::Obj;
        else if (looks_binary_stl(data))
            format = MeshFormat::StlBinary;
        else if (data.rfind("solid", 0) == 0)
            format = MeshFormat::StlAscii;
        else
            format = MeshFormat::Obj;
    }
    TriMesh mesh;
    switch (format) {
        case MeshFormat::Obj: mesh = parse_obj(data); break;
        case MeshFormat::StlAscii: mesh = parse_stl_ascii(data); break;
        case MeshFormat::StlBinary: mesh = parse_stl_binary(data); break;
        case MeshFormat::Auto: break;
    }
    constexpr std::string_view kUnits = "# units ";
    if (format == MeshFormat::Obj && data.rfind(kUnits, 0) == 0) {
        const auto end = data.find('\n');
        mesh.units = data.substr(kUnits.size(), end - kUnits.size());
        if (!mesh.units.empty() && mesh.units.back() == '\r') mesh.units.pop_back();
    }
    if (strict) {
        const auto diag = validate_patch(mesh);
        if (!diag.is_valid_patch()) {
            std::string msg;
            for (const auto& p : diag.problems()) msg += (msg.empty() ? "" : "; ") + p;
            throw TopologyError(path.string() + ": " + msg);
        }
    }
    return mesh;
}

void save_mesh(const TriMesh& mesh, const fs::path& path, MeshFormat format) {
    if (format == MeshFormat::Auto) format = format_from_extension(path);
    switch (format) {
        case MeshFormat::Obj: detail::write_file_atomic(path, write_obj(mesh)); break;
        case MeshFormat::StlAscii: detail::write_file_atomic(path, write_stl_ascii(mesh)); break;
        case MeshFormat::StlBinary: detail::write_file_atomic(path, write_stl_binary(mesh)); break;
        case MeshFormat::Auto: break;
    }
}

}  // namespace capharm::meshkit
