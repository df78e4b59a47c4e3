#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "periodforge/mesh.hpp"

namespace periodforge {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::ostream& out, T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.write(b, sizeof(T));
}

template <class T>
T get_le(std::istream& in, const std::string& path) {
    char b[sizeof(T)];
    if (!in.read(b, sizeof(T))) throw IoError(path + ": truncated PLY body");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

void write_obj(const SurfaceMesh& m, const std::string& path) {
    std::string s;
    s.reserve(m.size() * 120 + m.faces.size() * 40);
    s += "# periodforge surface mesh\n";
    for (const auto& v : m.vertices) s += fmt::format("v {:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
    for (const auto& n : m.normals) s += fmt::format("vn {:.17g} {:.17g} {:.17g}\n", n.x(), n.y(), n.z());
    for (const auto& f : m.faces)
        s += fmt::format("f {0}//{0} {1}//{1} {2}//{2}\n", f[0] + 1, f[1] + 1, f[2] + 1);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << s;
    if (!out) throw IoError(path + ": write failed");
}

void write_ply(const SurfaceMesh& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "ply\nformat binary_little_endian 1.0\ncomment periodforge surface mesh\n"
        << "element vertex " << m.size() << "\n"
        << "property float x\nproperty float y\nproperty float z\n"
        << "property float nx\nproperty float ny\nproperty float nz\n"
        << "element face " << m.faces.size() << "\n"
        << "property list uchar int vertex_indices\nend_header\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (int k = 0; k < 3; ++k) put_le(out, static_cast<float>(m.vertices[i][k]));
        const Vec3 n = i < m.normals.size() ? m.normals[i] : Vec3::Zero();
        for (int k = 0; k < 3; ++k) put_le(out, static_cast<float>(n[k]));
    }
    for (const auto& f : m.faces) {
        put_le(out, static_cast<std::uint8_t>(3));
        for (int k = 0; k < 3; ++k) put_le(out, static_cast<std::int32_t>(f[k]));
    }
    if (!out) throw IoError(path + ": write failed");
}

int parse_index(const std::string& tok, std::size_t count, const std::string& path) {
    const auto slash = tok.find('/');
    long v = 0;
    try {
        v = std::stol(tok.substr(0, slash));
    } catch (const std::exception&) {
        throw IoError(path + ": bad face index '" + tok + "'");
    }
    if (v < 1 || static_cast<std::size_t>(v) > count) throw IoError(path + ": face index out of range");
    return static_cast<int>(v - 1);
}

MeshData read_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open for reading");
    MeshData d;
    std::vector<std::array<std::string, 3>> raw;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v" || tag == "vn") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) throw IoError(path + ": bad " + tag + " record");
            (tag == "v" ? d.vertices : d.normals).push_back(p);
        } else if (tag == "f") {
            std::array<std::string, 3> t;
            std::string extra;
            if (!(ls >> t[0] >> t[1] >> t[2]) || (ls >> extra)) throw IoError(path + ": only triangles are supported");
            raw.push_back(t);
        }
    }
    for (const auto& t : raw)
        d.faces.push_back({parse_index(t[0], d.vertices.size(), path), parse_index(t[1], d.vertices.size(), path),
                           parse_index(t[2], d.vertices.size(), path)});
    return d;
}

MeshData read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::string line;
    std::size_t nv = 0, nf = 0;
    int vprops = 0;
    if (!std::getline(in, line) || line != "ply") throw IoError(path + ": not a PLY file");
    bool le = false;
    while (std::getline(in, line)) {
        if (line == "end_header") break;
        std::istringstream ls(line);
        std::string a, b, c;
        ls >> a >> b >> c;
        if (a == "format") le = b == "binary_little_endian";
        if (a == "element" && b == "vertex") nv = std::stoul(c);
        if (a == "element" && b == "face") nf = std::stoul(c);
        if (a == "property" && b == "float") ++vprops;
    }
    if (line != "end_header") throw IoError(path + ": missing end_header");
    if (!le || vprops != 6) throw IoError(path + ": unsupported PLY layout");
    MeshData d;
    d.vertices.resize(nv);
    d.normals.resize(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        for (int k = 0; k < 3; ++k) d.vertices[i][k] = get_le<float>(in, path);
        for (int k = 0; k < 3; ++k) d.normals[i][k] = get_le<float>(in, path);
    }
    d.faces.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        if (get_le<std::uint8_t>(in, path) != 3) throw IoError(path + ": only triangles are supported");
        for (int k = 0; k < 3; ++k) {
            auto v = get_le<std::int32_t>(in, path);
            if (v < 0 || static_cast<std::size_t>(v) >= nv) throw IoError(path + ": face index out of range");
            d.faces[i][k] = v;
        }
    }
    return d;
}

}  // namespace

void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path) {
    if (mesh.normals.size() != mesh.vertices.size() && !mesh.normals.empty())
        throw DomainError("normals do not match the vertices");
    if (format == MeshFormat::obj)
        write_obj(mesh, path);
    else
        write_ply(mesh, path);
}

MeshData read_mesh(const std::string& path, MeshFormat format) {
    return format == MeshFormat::obj ? read_obj(path) : read_ply(path);
}

}  // namespace periodforge
