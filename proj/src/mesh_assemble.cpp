#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "periodforge/detail/spatial_hash.hpp"
#include "periodforge/mesh.hpp"

namespace periodforge {

namespace {

using Mat3 = Eigen::Matrix3d;

std::pair<double, double> z_key(cplx z) { return {z.real(), z.imag() == 0.0 ? 0.0 : z.imag()}; }

bool same_curve_point(const Provenance& a, const Provenance& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != PointKind::regular) return true;
    return std::abs(a.u - b.u) <= 1e-6 * std::max(std::abs(a.u), std::abs(b.u));
}

struct WeldResult {
    SurfaceMesh mesh;
    std::vector<char> welded;      // per vertex of the first part
    std::vector<double> mismatch;  // nearest same-point distance that failed to weld
};

// Appends `b` to `a`, merging vertices of b that sit at the same curve point
// and position as a vertex of a.
WeldResult weld(const SurfaceMesh& a, const SurfaceMesh& b) {
    WeldResult r;
    r.mesh = a;
    r.welded.assign(a.size(), 0);
    r.mismatch.assign(a.size(), std::numeric_limits<double>::infinity());
    std::map<std::pair<double, double>, std::vector<int>> by_z;
    for (std::size_t i = 0; i < a.size(); ++i) by_z[z_key(a.provenance[i].z)].push_back(static_cast<int>(i));

    std::vector<int> map(b.size(), -1);
    auto& m = r.mesh;
    for (std::size_t j = 0; j < b.size(); ++j) {
        auto it = by_z.find(z_key(b.provenance[j].z));
        if (it != by_z.end()) {
            for (int i : it->second) {
                if (!same_curve_point(a.provenance[i], b.provenance[j])) continue;
                double d = (a.vertices[i] - b.vertices[j]).norm();
                if (d <= weld_tolerance) {
                    map[j] = i;
                    r.welded[i] = 1;
                    m.tags[i] |= b.tags[j];
                    break;
                }
                r.mismatch[i] = std::min(r.mismatch[i], d);
            }
        }
        if (map[j] < 0) {
            map[j] = static_cast<int>(m.vertices.size());
            m.vertices.push_back(b.vertices[j]);
            m.normals.push_back(b.normals[j]);
            m.provenance.push_back(b.provenance[j]);
            m.tags.push_back(b.tags[j]);
        }
    }
    for (const auto& f : b.faces) m.faces.push_back({map[f[0]], map[f[1]], map[f[2]]});
    return r;
}

void require_welded(const WeldResult& w, const SurfaceMesh& part, std::uint8_t tags, const char* what) {
    double worst = 0.0;
    bool failed = false;
    for (std::size_t i = 0; i < part.size(); ++i)
        if ((part.tags[i] & tags) && !w.welded[i]) {
            failed = true;
            worst = std::max(worst, w.mismatch[i]);
        }
    if (failed)
        throw SymmetryError(std::string(what) + " did not weld; worst mismatch " + std::to_string(worst), worst);
}

// Positions and normals mapped by M (positions also shifted); winding flipped when `flip`.
SurfaceMesh transformed(const SurfaceMesh& src, const Mat3& M, const Vec3& shift, bool flip) {
    SurfaceMesh c = src;
    for (std::size_t i = 0; i < c.size(); ++i) {
        c.vertices[i] = M * src.vertices[i] + shift;
        c.normals[i] = M * src.normals[i];
    }
    if (flip)
        for (auto& f : c.faces) std::swap(f[1], f[2]);
    return c;
}

Mat3 rotation_about(const Vec3& d) { return 2.0 * d * d.transpose() - Mat3::Identity(); }

int find_vertex(const SurfaceMesh& m, cplx z, int copy) {
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.provenance[i].z == z && m.provenance[i].copy == copy) return static_cast<int>(i);
    return -1;
}

}  // namespace

SurfaceMesh assemble_piece(const SurfaceMesh& half, const SurfaceParams& p) {
    if (half.empty()) throw DomainError("empty half mesh");
    const WeierstrassData wd(p);

    // axis of X([0, x]) from the farthest S-L vertex
    Vec3 far = Vec3::Zero();
    for (std::size_t i = 0; i < half.size(); ++i)
        if ((half.tags[i] & tag_seg_S_L) && half.vertices[i].norm() > far.norm()) far = half.vertices[i];
    if (far.norm() == 0.0) throw GeometryError("half mesh has no image of (0, x)");
    const Vec3 axis = far.normalized();

    // second sheet: 180-degree rotation about Ox3, w -> -w
    const Mat3 rot3 = Vec3(-1.0, -1.0, 1.0).asDiagonal();
    SurfaceMesh sheet = transformed(half, rot3, Vec3::Zero(), false);
    for (auto& pv : sheet.provenance) {
        pv.u = -pv.u;
        pv.sheet = Sheet::minus;
        pv.copy = 1;
    }
    auto lower = weld(half, sheet);
    require_welded(lower, half, tag_slit, "slit");

    // upper half: rotation about the axis, (z, w) -> (conj z, conj w)
    const Mat3 rot = rotation_about(axis);
    SurfaceMesh upper = transformed(lower.mesh, rot, Vec3::Zero(), false);
    double agree = 0.0;
    for (std::size_t i = 0; i < upper.size(); ++i) {
        auto& pv = upper.provenance[i];
        pv.z = std::conj(pv.z);
        pv.u = std::conj(pv.u);
        pv.copy += 2;
        Vec3 n = provenance_normal(wd, pv);
        agree += n.dot(upper.normals[i]);
        upper.normals[i] = n;
    }
    if (agree < 0)
        for (auto& f : upper.faces) std::swap(f[1], f[2]);
    auto piece = weld(lower.mesh, upper);
    require_welded(piece, lower.mesh, tag_seg_S_L | tag_seg_E_S, "interior symmetry lines");

    SurfaceMesh out = std::move(piece.mesh);
    out.diagnostics = half.diagnostics;
    auto& fr = out.frame;
    fr.axis = axis;
    fr.axis_index = std::abs(axis.x()) >= std::abs(axis.y()) ? 0 : 1;
    fr.cross_axis = Vec3(0, 0, 1).cross(axis).normalized();
    int nw = 0;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out.tags[i] & tag_arc_A_E) {
            fr.half_width += std::abs(out.vertices[i].dot(fr.cross_axis));
            ++nw;
        }
    if (nw > 0) fr.half_width /= nw;
    const int a = find_vertex(out, 1.0, 0), f = find_vertex(out, 1.0, 2);
    if (a >= 0 && f >= 0) fr.alf_period = out.vertices[f] - out.vertices[a];
    fr.valid = nw > 0;
    return out;
}

Vec3 tiling_translation(const SurfaceMesh& piece) {
    if (!piece.frame.valid) throw DomainError("tiling needs an assembled piece");
    return 2.0 * piece.frame.alf_period;
}

SurfaceMesh tile_surface(const SurfaceMesh& piece, int copies) {
    if (copies < 0) throw DomainError("copies must be non-negative");
    if (copies == 0) return piece;
    const auto& fr = piece.frame;
    if (!fr.valid) throw DomainError("tiling needs an assembled piece");
    const Vec3 n = fr.cross_axis;
    const double e = fr.half_width;
    const Mat3 reflect = Mat3::Identity() - 2.0 * n * n.transpose();
    const Vec3 T = tiling_translation(piece);

    SurfaceMesh out;
    out.diagnostics = piece.diagnostics;
    out.frame = piece.frame;
    double scale = 0.0;
    for (const auto& v : piece.vertices) scale = std::max(scale, v.norm());
    detail::SpatialHash hash(std::max(1e-6, 1e-6 * scale));
    for (int j = -copies; j <= copies; ++j) {
        const bool odd = (j % 2) != 0;
        SurfaceMesh c = odd ? transformed(piece, reflect, 2.0 * e * n + 0.5 * (j - 1) * T, true)
                            : transformed(piece, Mat3::Identity(), 0.5 * j * T, false);
        for (auto& pv : c.provenance) pv.region = j;
        std::vector<int> map(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            int hit = (c.tags[i] & tag_arc_A_E) ? hash.nearest(c.vertices[i], weld_tolerance) : -1;
            if (hit >= 0 && out.provenance[hit].region != j) {
                map[i] = hit;
                continue;
            }
            map[i] = static_cast<int>(out.vertices.size());
            out.vertices.push_back(c.vertices[i]);
            out.normals.push_back(c.normals[i]);
            out.provenance.push_back(c.provenance[i]);
            out.tags.push_back(c.tags[i]);
            if (c.tags[i] & tag_arc_A_E) hash.insert(c.vertices[i], map[i]);
        }
        for (const auto& f : c.faces) out.faces.push_back({map[f[0]], map[f[1]], map[f[2]]});
    }
    return out;
}

}  // namespace periodforge
