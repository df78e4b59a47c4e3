#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "periodforge/detail/spatial_hash.hpp"
#include "periodforge/gauss_kronrod.hpp"
#include "periodforge/mesh.hpp"
#include "periodforge/parallel.hpp"

namespace periodforge {

namespace {

std::map<std::pair<int, int>, int> edge_counts(const SurfaceMesh& m) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& f : m.faces)
        for (int k = 0; k < 3; ++k) {
            int a = f[k], b = f[(k + 1) % 3];
            ++count[{std::min(a, b), std::max(a, b)}];
        }
    return count;
}

double cot(const Vec3& a, const Vec3& b) {
    double s = a.cross(b).norm();
    return s > 0 ? a.dot(b) / s : 0.0;
}

// Largest distance of the tagged vertices from the line through the origin
// along their farthest member. Returns the unit direction through `dir`.
double line_residual(const SurfaceMesh& m, std::uint8_t tag, Vec3* dir) {
    Vec3 far = Vec3::Zero();
    for (std::size_t i = 0; i < m.size(); ++i)
        if ((m.tags[i] & tag) && m.vertices[i].norm() > far.norm()) far = m.vertices[i];
    if (far.norm() == 0.0) {
        *dir = Vec3::Zero();
        return 0.0;
    }
    const Vec3 d = far.normalized();
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.tags[i] & tag) {
            const Vec3& v = m.vertices[i];
            worst = std::max(worst, (v - v.dot(d) * d).norm());
        }
    *dir = d;
    return worst;
}

double length_on_segment(const WeierstrassData& wd, cplx a, cplx b) {
    auto lam = [&](double t) {
        auto pt = WeierstrassData::at(a + (b - a) * t);
        return wd.conformal_factor(pt, std::sqrt(std::abs(wd.u2(pt))));
    };
    return std::abs(b - a) * gauss_legendre(lam, 0.0, 1.0, 8);
}

}  // namespace

std::vector<bool> boundary_vertices(const SurfaceMesh& m) {
    std::vector<bool> on(m.size(), false);
    for (const auto& [e, c] : edge_counts(m))
        if (c == 1) on[e.first] = on[e.second] = true;
    return on;
}

int count_end_loops(const SurfaceMesh& m) {
    std::vector<std::vector<int>> adj(m.size());
    for (const auto& [e, c] : edge_counts(m)) {
        if (c != 1 || !(m.tags[e.first] & tag_end_cut) || !(m.tags[e.second] & tag_end_cut)) continue;
        adj[e.first].push_back(e.second);
        adj[e.second].push_back(e.first);
    }
    std::vector<char> seen(m.size(), 0);
    int loops = 0;
    for (std::size_t s = 0; s < m.size(); ++s) {
        if (seen[s] || adj[s].empty()) continue;
        bool closed = true;
        std::vector<int> stack{static_cast<int>(s)};
        seen[s] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (adj[v].size() != 2) closed = false;
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        if (closed) ++loops;
    }
    return loops;
}

double mean_curvature_rms(const SurfaceMesh& m) {
    const std::size_t n = m.size();
    std::vector<Vec3> lap(n, Vec3::Zero());
    std::vector<double> area(n, 0.0), len_sum(n, 0.0);
    std::vector<int> len_count(n, 0);
    for (const auto& f : m.faces) {
        const Vec3* p[3] = {&m.vertices[f[0]], &m.vertices[f[1]], &m.vertices[f[2]]};
        double c[3];
        for (int k = 0; k < 3; ++k) c[k] = cot(*p[(k + 1) % 3] - *p[k], *p[(k + 2) % 3] - *p[k]);
        const double A = 0.5 * (*p[1] - *p[0]).cross(*p[2] - *p[0]).norm();
        for (int k = 0; k < 3; ++k) {
            const int i = f[(k + 1) % 3], j = f[(k + 2) % 3];  // edge opposite corner k
            const Vec3 e = m.vertices[i] - m.vertices[j];
            lap[i] += c[k] * e;
            lap[j] -= c[k] * e;
            len_sum[i] += e.norm();
            len_sum[j] += e.norm();
            ++len_count[i];
            ++len_count[j];
        }
        // mixed area
        int obtuse = -1;
        for (int k = 0; k < 3; ++k)
            if ((*p[(k + 1) % 3] - *p[k]).dot(*p[(k + 2) % 3] - *p[k]) < 0) obtuse = k;
        for (int k = 0; k < 3; ++k) {
            const int v = f[k];
            if (obtuse < 0) {
                const Vec3 a = *p[(k + 1) % 3] - *p[k], b = *p[(k + 2) % 3] - *p[k];
                area[v] += (a.squaredNorm() * c[(k + 2) % 3] + b.squaredNorm() * c[(k + 1) % 3]) / 8.0;
            } else {
                area[v] += obtuse == k ? A / 2 : A / 4;
            }
        }
    }
    const auto boundary = boundary_vertices(m);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (boundary[i] || area[i] <= 0 || len_count[i] == 0) continue;
        const double H = lap[i].norm() / (4.0 * area[i]);
        const double h = H * len_sum[i] / len_count[i];
        sum += h * h;
        ++count;
    }
    return count ? std::sqrt(sum / count) : 0.0;
}

double DiscreteReport::symmetry_max() const {
    double s = std::max({collinearity_S_L, collinearity_E_S, coplanarity});
    if (rotational_invariance >= 0) s = std::max(s, rotational_invariance);
    return s;
}

DiscreteReport discrete_checks(const SurfaceMesh& m, const SurfaceParams& p) {
    DiscreteReport r;
    if (m.empty()) return r;
    const WeierstrassData wd(p);
    const std::size_t n = m.size();
    const auto boundary = boundary_vertices(m);

    // (a) discrete vertex normals against the Gauss map
    std::vector<Vec3> vn(n, Vec3::Zero());
    for (const auto& f : m.faces) {
        const Vec3 fn = (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]);
        if (fn.norm() == 0) continue;
        for (int k = 0; k < 3; ++k) {
            const Vec3 a = m.vertices[f[(k + 1) % 3]] - m.vertices[f[k]];
            const Vec3 b = m.vertices[f[(k + 2) % 3]] - m.vertices[f[k]];
            const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
            vn[f[k]] += angle * fn.normalized();
        }
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (boundary[i] || vn[i].norm() == 0) continue;
        const double deg =
            std::acos(std::clamp(vn[i].normalized().dot(m.normals[i]), -1.0, 1.0)) * 180.0 / std::numbers::pi;
        r.gauss_max_deg = std::max(r.gauss_max_deg, deg);
        sq += deg * deg;
        ++r.interior_vertices;
    }
    if (r.interior_vertices) r.gauss_rms_deg = std::sqrt(sq / r.interior_vertices);

    // (b)
    r.mean_curvature_rms = mean_curvature_rms(m);

    // (c) symmetry residuals
    Vec3 d_sl, d_es;
    r.collinearity_S_L = line_residual(m, tag_seg_S_L, &d_sl);
    r.collinearity_E_S = line_residual(m, tag_seg_E_S, &d_es);
    if (d_sl.norm() > 0 && d_es.norm() > 0)
        r.orthogonality_rad = std::abs(std::acos(std::clamp(std::abs(d_sl.dot(d_es)), 0.0, 1.0)) - std::numbers::pi / 2);
    r.axis = std::abs(d_sl.x()) >= std::abs(d_sl.y()) ? "x1" : "x2";
    const Vec3 cross = Vec3(0, 0, 1).cross(d_sl).normalized();
    double mean = 0.0;
    int arc = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (m.tags[i] & tag_arc_A_E) {
            mean += std::abs(m.vertices[i].dot(cross));
            ++arc;
        }
    if (arc) {
        mean /= arc;
        for (std::size_t i = 0; i < n; ++i)
            if (m.tags[i] & tag_arc_A_E)
                r.coplanarity = std::max(r.coplanarity, std::abs(std::abs(m.vertices[i].dot(cross)) - mean));
    }
    bool two_sheets = false;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        two_sheets = two_sheets || m.provenance[i].copy != 0;
        scale = std::max(scale, m.vertices[i].norm());
    }
    if (two_sheets) {
        const double cell = 1e-3 * scale;
        detail::SpatialHash hash(cell);
        for (std::size_t i = 0; i < n; ++i) hash.insert(m.vertices[i], static_cast<int>(i));
        r.rotational_invariance = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& v = m.vertices[i];
            double dist = cell;
            hash.nearest(Vec3(-v.x(), -v.y(), v.z()), cell, &dist);
            r.rotational_invariance = std::max(r.rotational_invariance, dist);
        }
    }

    // conformality on faces of region 0 away from the branch points
    std::vector<double> dev(m.faces.size(), -1.0);
    parallel_for(m.faces.size(), [&](std::size_t k) {
        const auto& f = m.faces[k];
        for (int v : f)
            if (m.provenance[v].kind != PointKind::regular || m.provenance[v].region != 0) return;
        double lo = 1e300, hi = 0.0;
        for (int e = 0; e < 3; ++e) {
            const int a = f[e], b = f[(e + 1) % 3];
            const double pred = length_on_segment(wd, m.provenance[a].z, m.provenance[b].z);
            const double ratio = (m.vertices[a] - m.vertices[b]).norm() / pred;
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        dev[k] = hi / lo - 1.0;
    });
    for (double d : dev)
        if (d >= 0) {
            r.conformality_max = std::max(r.conformality_max, d);
            ++r.conformal_triangles;
        }

    // catenoidal end of the lower half: x3 = (eta/2) ln(x1^2 + x2^2) + mu
    const cplx yb = p.ybar();
    double nearest = 1e300;
    for (std::size_t i = 0; i < n; ++i)
        if (m.provenance[i].copy < 2) nearest = std::min(nearest, std::abs(m.provenance[i].z - yb));
    std::vector<int> pick;
    for (std::size_t i = 0; i < n; ++i)
        if (m.provenance[i].copy < 2 && m.provenance[i].region == 0 && std::abs(m.provenance[i].z - yb) <= 2.0 * nearest)
            pick.push_back(static_cast<int>(i));
    r.end.samples = static_cast<int>(pick.size());
    r.end.eta_predicted = -2.0 * residue_dh(p).real();
    if (pick.size() >= 3) {
        Eigen::MatrixXd A(pick.size(), 2);
        Eigen::VectorXd b(pick.size());
        for (std::size_t k = 0; k < pick.size(); ++k) {
            const Vec3& v = m.vertices[pick[k]];
            A(k, 0) = 0.5 * std::log(v.x() * v.x() + v.y() * v.y());
            A(k, 1) = 1.0;
            b(k) = v.z();
        }
        Eigen::Vector2d sol = A.colPivHouseholderQr().solve(b);
        r.end.eta = sol(0);
        r.end.mu = sol(1);
        r.end.residual_rms = std::sqrt((A * sol - b).squaredNorm() / pick.size());
        r.end.sign_match = (r.end.eta < 0) == (r.end.eta_predicted < 0);
    }
    return r;
}

}  // namespace periodforge
