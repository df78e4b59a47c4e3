#pragma once

#include <string>

#include "periodforge/limits.hpp"
#include "periodforge/mesh.hpp"
#include "periodforge/period_solver.hpp"

namespace periodforge {

inline constexpr const char* version_string = "1.0.0";
inline constexpr const char* params_schema = "periodforge.params/1";
inline constexpr const char* sweep_schema = "periodforge.sweep/1";
inline constexpr const char* limits_schema = "periodforge.limits/1";
inline constexpr const char* mesh_schema = "periodforge.mesh-checks/1";

// Shortest round-trip decimal form.
std::string format_number(double v);

std::string params_json(const SurfaceParams& p, const PeriodReport& r, double quadrature_tol);
// Reads a params document; x, rho, lambda, y_re, y_im, alpha and c are required.
SurfaceParams parse_params_json(const std::string& text, const std::string& origin);
SurfaceParams read_params_file(const std::string& path);

// One row per solved point in decreasing x; a failed tail is marked by a
// closing row starting "# truncated".
std::string sweep_csv(double rho, const SweepResult& s);
std::string limit_csv(const LimitReport& r);

struct MeshRunInfo {
    int resolution = 0;
    int copies = 0;
    double eps_end = 0.0;
    std::string format;
    std::size_t vertices = 0;
    std::size_t faces = 0;
    int end_loops = 0;
    Vec3 translation = Vec3::Zero();
};
std::string mesh_report_json(const DiscreteReport& r, const SurfaceDiagnostics& d, const MeshRunInfo& info);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace periodforge
