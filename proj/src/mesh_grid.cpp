#include <algorithm>
#include <cmath>
#include <numbers>

#include "periodforge/mesh.hpp"

namespace periodforge {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Chart {
    cplx Y, Yb;

    explicit Chart(const SurfaceParams& p) : Y(p.Y()), Yb(std::conj(p.Y())) {}

    cplx W(cplx z) const {
        if (z == 0.0) return 1.0;
        cplx Z = eval_Z(z);
        return (Z - Yb) / (Z - Y);
    }
    // Inverse onto the lower half disk. On the boundary circle Z is real and
    // is taken from the upper half plane.
    cplx z(cplx W, bool boundary) const {
        if (W == 1.0) return 0.0;
        cplx Z = (Yb - W * Y) / (1.0 - W);
        if (boundary || Z.imag() < 0.0) Z = cplx(Z.real(), 0.0);
        cplx s = std::sqrt(Z - 2.0) * std::sqrt(Z + 2.0);
        return 2.0 / (Z + s);
    }
};

// Points a, ..., (excluding b) with steps growing by `ratio` from `first` at
// the graded ends until they reach `base`.
std::vector<double> graded(double a, double b, bool grade_a, bool grade_b, double first, double base, double ratio) {
    const double len = b - a;
    auto ramp = [&](bool on) {
        std::vector<double> s;
        if (!on) return s;
        for (double h = first; h < base; h *= ratio) s.push_back(h);
        return s;
    };
    auto left = ramp(grade_a), right = ramp(grade_b);
    auto total = [](const std::vector<double>& v) {
        double t = 0.0;
        for (double h : v) t += h;
        return t;
    };
    while (total(left) + total(right) > 0.8 * len && (left.size() > 1 || right.size() > 1)) {
        if (left.size() >= right.size())
            left.pop_back();
        else
            right.pop_back();
    }
    if (double t = total(left) + total(right); t > 0.8 * len) {
        for (auto* v : {&left, &right})
            for (double& h : *v) h *= 0.5 * len / t;
    }
    const double mid = len - total(left) - total(right);
    const int n = std::max(1, static_cast<int>(std::lround(mid / base)));
    std::vector<double> out{a};
    double t = a;
    for (double h : left) out.push_back(t += h);
    for (int k = 1; k < n; ++k) out.push_back(t + mid * k / n);
    t += mid;
    for (auto it = right.rbegin(); it != right.rend(); ++it) {
        out.push_back(t);
        t += *it;
    }
    return out;  // b itself belongs to the next interval
}

double angle_in(cplx w) {
    double a = std::arg(w);
    return a < 0 ? a + two_pi : a;
}

}  // namespace

const char* tag_name(BoundaryTag t) {
    switch (t) {
        case tag_seg_E_S: return "seg_E_S";
        case tag_seg_S_L: return "seg_S_L";
        case tag_seg_L_A: return "seg_L_A";
        case tag_arc_A_E: return "arc_A_E";
        case tag_end_cut: return "end_cut";
        case tag_slit: return "slit";
    }
    return "?";
}

std::vector<std::pair<int, int>> DomainGrid::edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve(3 * cells.size());
    for (const auto& c : cells)
        for (int k = 0; k < 3; ++k) {
            int a = c[k], b = c[(k + 1) % 3];
            e.emplace_back(std::min(a, b), std::max(a, b));
        }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

double end_clearance(const SurfaceParams& p) {
    cplx yb = p.ybar();
    return std::min(-yb.imag(), 1.0 - std::abs(yb));
}

double default_eps_end(const SurfaceParams& p) { return 0.05 * end_clearance(p); }

DomainGrid build_grid(const SurfaceParams& p, int resolution, double eps_end, double grading) {
    if (resolution < 8) throw DomainError("grid resolution must be at least 8");
    if (!(grading > 1.0)) throw DomainError("grading ratio must exceed 1");
    p.validate();
    const cplx yb = p.ybar();
    const double clearance = end_clearance(p);
    if (eps_end < 0) eps_end = default_eps_end(p);
    if (!(eps_end > 0)) throw DomainError("eps_end must be positive");
    if (eps_end >= clearance)
        throw GeometryError("end-cut disk of radius " + std::to_string(eps_end) +
                            " reaches the boundary of the lower half disk (clearance " + std::to_string(clearance) +
                            ")");
    const Chart chart(p);

    // chart radius of the end cut: first-order guess, then enlarged until the
    // preimage circle keeps eps_end away from ybar
    const cplx dZ = 1.0 - 1.0 / (yb * yb);
    double r_end = std::abs(dZ / (chart.Yb - chart.Y)) * eps_end;
    for (int it = 0;; ++it) {
        if (r_end >= 0.95) throw GeometryError("end cut does not fit inside the chart disk");
        double dmin = 1e300;
        for (int k = 0; k < 720; ++k) {
            cplx z = chart.z(std::polar(r_end, two_pi * k / 720), false);
            dmin = std::min(dmin, std::abs(z - yb));
        }
        if (dmin >= eps_end) break;
        if (it > 60) throw GeometryError("could not place the end cut");
        r_end *= 1.0001 * eps_end / dmin;
    }

    const double theta_E = angle_in(chart.W(-1.0));
    const double theta_A = angle_in(chart.W(1.0));
    const double theta_L = angle_in(chart.W(p.x));
    if (!(0 < theta_E && theta_E < theta_A && theta_A < theta_L && theta_L < two_pi))
        throw DomainError("boundary points out of order in the grid chart");
    const double theta_cut = 0.5 * (theta_E + theta_A);

    const double base = std::numbers::pi / resolution;
    const double first = base * base / 4.0;
    struct Piece {
        double a, b;
        bool ga, gb;
    };
    const Piece pieces[] = {{theta_cut, theta_A, false, true},
                            {theta_A, theta_L, true, true},
                            {theta_L, two_pi, true, true},
                            {two_pi, two_pi + theta_E, true, true},
                            {two_pi + theta_E, two_pi + theta_cut, true, false}};
    std::vector<double> theta;
    std::vector<int> starts;
    for (const auto& pc : pieces) {
        starts.push_back(static_cast<int>(theta.size()));
        auto part = graded(pc.a, pc.b, pc.ga, pc.gb, first, base, grading);
        theta.insert(theta.end(), part.begin(), part.end());
    }
    theta.push_back(two_pi + theta_cut);
    const int col_A = starts[1], col_L = starts[2], col_S = starts[3], col_E = starts[4];
    const int columns = static_cast<int>(theta.size());

    const double s0 = std::log(r_end);
    std::vector<double> radial = graded(s0, 0.0, false, true, first, -s0 / resolution, grading);
    radial.push_back(0.0);
    const int rings = static_cast<int>(radial.size());

    DomainGrid g;
    g.columns = columns;
    g.rings = rings;
    g.eps_end = eps_end;
    g.chart_radius = r_end;
    g.nodes.resize(static_cast<std::size_t>(columns) * rings);
    g.chart.resize(g.nodes.size());
    g.tags.assign(g.nodes.size(), 0);

    for (int j = 0; j < rings; ++j) {
        const bool outer = j == rings - 1;
        const double r = outer ? 1.0 : std::exp(radial[j]);
        for (int i = 0; i + 1 < columns; ++i) {
            const int n = g.index(i, j);
            cplx W = std::polar(r, theta[i]);
            cplx z;
            std::uint8_t tag = 0;
            if (!outer) {
                z = chart.z(W, false);
            } else if (i == col_A) {
                z = 1.0, tag = tag_seg_L_A | tag_arc_A_E;
                g.node_one = n;
            } else if (i == col_L) {
                z = p.x, tag = tag_seg_L_A | tag_seg_S_L;
                g.node_x = n;
            } else if (i == col_S) {
                z = 0.0, W = 1.0, tag = tag_seg_S_L | tag_seg_E_S;
                g.origin = n;
            } else if (i == col_E) {
                z = -1.0, tag = tag_seg_E_S | tag_arc_A_E;
                g.node_minus_one = n;
            } else {
                z = chart.z(W, true);
                if (i < col_A || i > col_E) {
                    tag = tag_arc_A_E;
                    double t = std::min(0.0, std::arg(z));
                    z = std::polar(1.0, t);
                } else if (i < col_L) {
                    tag = tag_seg_L_A;
                    z = std::clamp(z.real(), p.x, 1.0);
                } else if (i < col_S) {
                    tag = tag_seg_S_L;
                    z = std::clamp(z.real(), 0.0, p.x);
                } else {
                    tag = tag_seg_E_S;
                    z = std::clamp(z.real(), -1.0, 0.0);
                }
            }
            if (j == 0) tag |= tag_end_cut;
            if (i == 0) tag |= tag_slit;
            g.nodes[n] = z;
            g.chart[n] = W;
            g.tags[n] = tag;
        }
        // the far side of the slit repeats the first column exactly
        const int a = g.index(0, j), b = g.index(columns - 1, j);
        g.nodes[b] = g.nodes[a];
        g.chart[b] = g.chart[a];
        g.tags[b] = g.tags[a];
    }

    for (std::size_t n = 0; n < g.nodes.size(); ++n) {
        cplx z = g.nodes[n];
        if (std::abs(z) > 1.0 + 1e-12 || z.imag() > 0.0)
            throw GeometryError("grid node outside the lower half disk");
        if (std::abs(z - yb) < eps_end * (1.0 - 1e-9)) throw GeometryError("grid node inside the end cut");
    }

    g.cells.reserve(2 * static_cast<std::size_t>(columns - 1) * (rings - 1));
    for (int j = 0; j + 1 < rings; ++j)
        for (int i = 0; i + 1 < columns; ++i) {
            const int a = g.index(i, j), b = g.index(i + 1, j), c = g.index(i + 1, j + 1), d = g.index(i, j + 1);
            g.cells.push_back({a, d, c});
            g.cells.push_back({a, c, b});
        }
    return g;
}

}  // namespace periodforge
