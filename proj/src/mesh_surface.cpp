#include <algorithm>
#include <cmath>
#include <deque>

#include "periodforge/mesh.hpp"
#include "periodforge/parallel.hpp"
#include "periodforge/quadrature.hpp"

namespace periodforge {

namespace {

struct Adjacent {
    int node;
    int edge;
};

Vec3 rotate_ox3(const Vec3& v) { return {-v.x(), -v.y(), v.z()}; }

// Spanning tree from `root`: breadth-first or depth-first. Returns X per node.
std::vector<Vec3> accumulate(const std::vector<std::vector<Adjacent>>& adj,
                             const std::vector<std::pair<int, int>>& edges, const std::vector<Vec3>& inc, int root,
                             bool depth_first, std::vector<char>* tree_edge) {
    const std::size_t n = adj.size();
    std::vector<Vec3> X(n, Vec3::Zero());
    std::vector<char> seen(n, 0);
    auto step = [&](int from, const Adjacent& a) {
        const auto& e = edges[a.edge];
        X[a.node] = X[from] + (e.first == from ? inc[a.edge] : Vec3(-inc[a.edge]));
        seen[a.node] = 1;
        if (tree_edge) (*tree_edge)[a.edge] = 1;
    };
    seen[root] = 1;
    if (!depth_first) {
        std::deque<int> queue{root};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (const auto& a : adj[v])
                if (!seen[a.node]) {
                    step(v, a);
                    queue.push_back(a.node);
                }
        }
    } else {
        std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k == adj[v].size()) {
                stack.pop_back();
                continue;
            }
            const Adjacent a = adj[v][k++];
            if (seen[a.node]) continue;
            step(v, a);
            stack.emplace_back(a.node, 0);
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw GeometryError("grid is not connected");
    return X;
}

}  // namespace

Vec3 provenance_normal(const WeierstrassData& wd, const Provenance& pv) {
    switch (pv.kind) {
        case PointKind::zero_of_g: return {0.0, 0.0, -1.0};
        case PointKind::pole_of_g: return {0.0, 0.0, 1.0};
        case PointKind::regular: break;
    }
    auto n = wd.normal(WeierstrassData::at(pv.z), pv.u);
    return Vec3(n[0], n[1], n[2]).normalized();
}

SurfaceMesh integrate_surface(const SurfaceParams& p, const DomainGrid& grid, const SurfaceOptions& opt) {
    const WeierstrassData wd(p);
    const std::size_t n = grid.size();
    if (n == 0 || grid.origin < 0 || grid.node_x < 0) throw DomainError("grid lacks the branch nodes");
    std::vector<PointKind> kind(n, PointKind::regular);
    kind[grid.origin] = PointKind::zero_of_g;
    kind[grid.node_x] = PointKind::pole_of_g;

    const auto edges = grid.edges();
    std::vector<std::vector<Adjacent>> adj(n);
    for (std::size_t k = 0; k < edges.size(); ++k) {
        adj[edges[k].first].push_back({edges[k].second, static_cast<int>(k)});
        adj[edges[k].second].push_back({edges[k].first, static_cast<int>(k)});
    }

    // reduced root over the regular nodes, seeded with u > 0 inside (0, x)
    int seed = -1;
    for (std::size_t v = 0; v < n; ++v)
        if (grid.tags[v] == tag_seg_S_L &&
            (seed < 0 || std::abs(grid.nodes[v].real() - 0.5 * p.x) < std::abs(grid.nodes[seed].real() - 0.5 * p.x)))
            seed = static_cast<int>(v);
    if (seed < 0) throw DomainError("grid has no interior node on (0, x)");
    std::vector<cplx> u(n, 0.0);
    std::vector<char> has_u(n, 0);
    u[seed] = std::sqrt(wd.u2(WeierstrassData::at(grid.nodes[seed])));
    has_u[seed] = 1;
    std::deque<int> queue{seed};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (const auto& a : adj[v]) {
            if (has_u[a.node] || kind[a.node] != PointKind::regular) continue;
            u[a.node] = continue_reduced_root(wd, {grid.nodes[v], grid.nodes[a.node]}, u[v]).back();
            has_u[a.node] = 1;
            queue.push_back(a.node);
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (kind[v] == PointKind::regular && !has_u[v]) throw GeometryError("regular grid nodes are not connected");

    std::vector<Vec3> inc(edges.size());
    parallel_for(edges.size(), [&](std::size_t k) {
        const auto [a, b] = edges[k];
        const int r = kind[a] == PointKind::regular ? a : b;
        auto I = integrate_forms_segment(wd, grid.nodes[a], grid.nodes[b], kind[a] != PointKind::regular,
                                         kind[b] != PointKind::regular, BranchRef{grid.nodes[r], u[r]}, opt.edge_tol);
        inc[k] = Vec3(I.value[0].real(), I.value[1].real(), I.value[2].real());
    });

    std::vector<char> in_tree(edges.size(), 0);
    auto X = accumulate(adj, edges, inc, grid.origin, false, &in_tree);
    auto X2 = accumulate(adj, edges, inc, grid.origin, true, nullptr);

    SurfaceDiagnostics d;
    d.edges = edges.size();
    Vec3 lo = X[0], hi = X[0];
    for (std::size_t v = 0; v < n; ++v) {
        lo = lo.cwiseMin(X[v]);
        hi = hi.cwiseMax(X[v]);
        d.path_independence = std::max(d.path_independence, (X[v] - X2[v]).norm());
    }
    d.diameter = (hi - lo).norm();
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (in_tree[k]) continue;
        const auto [a, b] = edges[k];
        d.cycle_residual = std::max(d.cycle_residual, (X[a] + inc[k] - X[b]).norm());
    }
    for (int j = 0; j < grid.rings; ++j) {
        const int a = grid.index(0, j), b = grid.index(grid.columns - 1, j);
        d.slit_residual = std::max(d.slit_residual, (X[a] - rotate_ox3(X[b])).norm());
    }
    const double bound = opt.closure_factor * d.diameter;
    if (d.cycle_residual > bound || d.slit_residual > bound)
        throw AccuracyError("cycle residual " + std::to_string(std::max(d.cycle_residual, d.slit_residual)) +
                                " exceeds " + std::to_string(bound) + " (periods not closed?)",
                            std::max(d.cycle_residual, d.slit_residual));

    SurfaceMesh m;
    m.vertices = std::move(X);
    m.faces = grid.cells;
    m.tags = grid.tags;
    m.diagnostics = d;
    m.provenance.resize(n);
    m.normals.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
        m.provenance[v] = Provenance{grid.nodes[v], u[v], kind[v], Sheet::plus, 0, 0};
        m.normals[v] = provenance_normal(wd, m.provenance[v]);
    }
    return m;
}

}  // namespace periodforge
