#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Geometry>

#include "periodforge/curve.hpp"

namespace periodforge {

using Vec3 = Eigen::Vector3d;

// Boundary tags of grid nodes and mesh vertices (bit flags; corner nodes carry two).
enum BoundaryTag : std::uint8_t {
    tag_seg_E_S = 1,
    tag_seg_S_L = 2,
    tag_seg_L_A = 4,
    tag_arc_A_E = 8,
    tag_end_cut = 16,
    tag_slit = 32,  // the ray that keeps w single-valued on the half mesh
};
const char* tag_name(BoundaryTag t);

// Log-polar grid in the chart W = (Z - conj(Y)) / (Z - Y), Z = z + 1/z, which
// maps the lower half disk onto the unit disk with ybar at 0. Columns run in
// angle from the slit around to the slit again, rings from the end cut out to
// the boundary circle.
struct DomainGrid {
    std::vector<cplx> nodes;  // z
    std::vector<cplx> chart;  // W
    std::vector<std::uint8_t> tags;
    std::vector<std::array<int, 3>> cells;
    int columns = 0;  // nodes per ring; the first and last column are the two sides of the slit
    int rings = 0;
    int origin = -1;  // z = 0
    int node_x = -1;  // z = x
    int node_one = -1;
    int node_minus_one = -1;
    double eps_end = 0.0;
    double chart_radius = 0.0;  // |W| on the end cut

    int index(int column, int ring) const { return ring * columns + column; }
    std::size_t size() const { return nodes.size(); }
    // Unique undirected edges (a < b), sorted.
    std::vector<std::pair<int, int>> edges() const;
};

// Distance from ybar to the boundary of the lower half disk.
double end_clearance(const SurfaceParams& p);
double default_eps_end(const SurfaceParams& p);

// Negative eps_end selects default_eps_end. Throws GeometryError if the
// eps_end disk around ybar reaches the boundary of the lower half disk.
DomainGrid build_grid(const SurfaceParams& p, int resolution, double eps_end = -1.0, double grading = 1.5);

enum class PointKind : std::uint8_t {
    regular,
    zero_of_g,  // z = 0, g = 0
    pole_of_g,  // z = x, g = infinity
};

struct Provenance {
    cplx z;
    cplx u;  // reduced root u = w (Z - 2cos alpha); unused at branch points
    PointKind kind = PointKind::regular;
    Sheet sheet = Sheet::plus;  // plus: the integrated sheet; minus: its 180-degree rotation about Ox3
    int copy = 0;               // 0, 1: the two sheets over the lower half disk; 2, 3: their images over the upper
    int region = 0;             // tiling region
};

struct SurfaceDiagnostics {
    double cycle_residual = 0.0;     // max over non-tree grid edges of the closure defect
    double slit_residual = 0.0;      // max mismatch of the two slit sides after the Ox3 rotation
    double path_independence = 0.0;  // max |X_tree1 - X_tree2|
    double diameter = 0.0;
    std::size_t edges = 0;
};

// Symmetry frame detected from an assembled piece.
struct PieceFrame {
    bool valid = false;
    Vec3 axis = Vec3::Zero();          // unit direction of X([0, x])
    Vec3 cross_axis = Vec3::Zero();    // unit horizontal direction orthogonal to it
    int axis_index = -1;               // 0 for Ox1, 1 for Ox2
    double half_width = 0.0;           // offset of the arc planes along cross_axis
    Vec3 alf_period = Vec3::Zero();    // X(F) - X(A)
};

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 3>> faces;
    std::vector<Provenance> provenance;
    std::vector<std::uint8_t> tags;
    SurfaceDiagnostics diagnostics;
    PieceFrame frame;

    std::size_t size() const { return vertices.size(); }
    bool empty() const { return vertices.empty(); }
};

struct SurfaceOptions {
    double edge_tol = 1e-12;       // per-edge quadrature tolerance
    double closure_factor = 1e-6;  // cycle residual bound relative to the diameter
};

// X by Re of the integrated forms along a BFS spanning tree rooted at z = 0; a
// second (depth-first) tree gives the path-independence figure. Throws
// AccuracyError if the cycle or slit residual exceeds closure_factor * diameter.
SurfaceMesh integrate_surface(const SurfaceParams& p, const DomainGrid& grid, const SurfaceOptions& opt = {});

// Unit normal from g at a provenance point, with the vertical limits at z = 0 and z = x.
Vec3 provenance_normal(const WeierstrassData& wd, const Provenance& pv);

inline constexpr double weld_tolerance = 1e-9;

// Second sheet by the Ox3 rotation, then the image under the rotation about
// the line of X([0, x]). Vertices at the same curve point and position are
// merged. Throws SymmetryError if the slit or the interior symmetry lines fail
// to weld.
SurfaceMesh assemble_piece(const SurfaceMesh& half, const SurfaceParams& p);

// Generator of the horizontal translation group: twice the A->L->F period.
Vec3 tiling_translation(const SurfaceMesh& piece);

// Regions j = -copies..copies: even j translate by (j/2) T, odd j reflect in
// the arc plane first. Adjacent regions share their arc images.
SurfaceMesh tile_surface(const SurfaceMesh& piece, int copies);

struct EndFit {
    double eta = 0.0;
    double mu = 0.0;
    double residual_rms = 0.0;
    double eta_predicted = 0.0;  // -2 Res(dh, ybar)
    bool sign_match = false;
    int samples = 0;
};

struct DiscreteReport {
    double gauss_max_deg = 0.0;
    double gauss_rms_deg = 0.0;
    std::size_t interior_vertices = 0;
    double mean_curvature_rms = 0.0;
    double collinearity_S_L = 0.0;
    double collinearity_E_S = 0.0;
    double orthogonality_rad = 0.0;
    double coplanarity = 0.0;
    double rotational_invariance = -1.0;  // negative if the mesh is a single sheet
    double conformality_max = 0.0;
    std::size_t conformal_triangles = 0;
    std::string axis;  // "x1" or "x2"
    EndFit end;

    double symmetry_max() const;
};

DiscreteReport discrete_checks(const SurfaceMesh& mesh, const SurfaceParams& p);

// Dimensionless RMS over interior vertices of |H_i| times the mean incident edge length.
double mean_curvature_rms(const SurfaceMesh& mesh);
// Closed boundary loops made of edges between end-cut vertices.
int count_end_loops(const SurfaceMesh& mesh);
std::vector<bool> boundary_vertices(const SurfaceMesh& mesh);

enum class MeshFormat { obj, ply };

void export_mesh(const SurfaceMesh& mesh, MeshFormat format, const std::string& path);

struct MeshData {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 3>> faces;
};
MeshData read_mesh(const std::string& path, MeshFormat format);

}  // namespace periodforge
