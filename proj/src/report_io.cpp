#include "periodforge/report_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

namespace periodforge {

namespace {

using json = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

double required(const json& doc, const char* key, const std::string& origin) {
    auto it = doc.find(key);
    if (it == doc.end() || !it->is_number())
        throw IoError(origin + ": missing numeric field '" + std::string(key) + "'");
    return it->get<double>();
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

std::string params_json(const SurfaceParams& p, const PeriodReport& r, double quadrature_tol) {
    json doc;
    doc["schema"] = params_schema;
    doc["version"] = version_string;
    doc["x"] = p.x;
    doc["rho"] = p.rho;
    doc["lambda"] = p.lambda;
    doc["y_re"] = p.y.real();
    doc["y_im"] = p.y.imag();
    doc["alpha"] = p.alpha;
    doc["c"] = p.c;
    doc["residuals"] = {{"p1", r.period_residuals[0]},
                        {"p2", r.period_residuals[1]},
                        {"p3", r.period_residuals[2]},
                        {"residue", r.residue_reality},
                        {"alpha_consistency", r.alpha_consistency}};
    doc["c1"] = r.c1;
    doc["c2"] = r.c2;
    doc["quadrature_tol"] = quadrature_tol;
    return doc.dump(2) + "\n";
}

SurfaceParams parse_params_json(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw IoError(origin + ": expected a JSON object");
    SurfaceParams p;
    p.x = required(doc, "x", origin);
    p.rho = required(doc, "rho", origin);
    p.lambda = required(doc, "lambda", origin);
    p.y = cplx(required(doc, "y_re", origin), required(doc, "y_im", origin));
    p.alpha = required(doc, "alpha", origin);
    p.c = required(doc, "c", origin);
    return p;
}

SurfaceParams read_params_file(const std::string& path) { return parse_params_json(read_text_file(path), path); }

std::string sweep_csv(double rho, const SweepResult& s) {
    std::string out = fmt::format("# schema {}\n", sweep_schema);
    out += "x,lambda,y_re,y_im,alpha,c,c1,c2,res_p1,res_p2,res_p3,res_residue,scaled_residue\n";
    for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
        const auto& pt = *it;
        const auto& p = pt.params;
        const auto& r = pt.report;
        const double scaled = (p.lambda / p.x) * residue_dh(p).real();
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", p.x, p.lambda, p.y.real(), p.y.imag(), p.alpha,
                           p.c, pt.c1, pt.c2, r.period_residuals[0], r.period_residuals[1], r.period_residuals[2],
                           r.residue_reality, scaled);
    }
    if (s.truncated)
        out += fmt::format("# truncated at x={} rho={}: {}\n", s.failed_x, rho, s.failure);
    return out;
}

std::string limit_csv(const LimitReport& r) {
    std::string out = fmt::format("# schema {}\n", limits_schema);
    out += fmt::format("# threshold {} ({}{}), final_error {}, passed {}\n", r.threshold,
                       r.rule == LimitRule::converge ? "converge" : "agreement", r.relative ? ", relative" : "",
                       r.final_error(), r.passed() ? "yes" : "no");
    out += "report,x,measured,target,abs_error,rate\n";
    const std::string name = csv_field(r.name);
    for (const auto& row : r.rows)
        out += fmt::format("{},{},{},{},{},{}\n", name, row.x, row.measured, row.target, row.abs_error, row.rate);
    return out;
}

std::string mesh_report_json(const DiscreteReport& r, const SurfaceDiagnostics& d, const MeshRunInfo& info) {
    json doc;
    doc["schema"] = mesh_schema;
    doc["version"] = version_string;
    doc["resolution"] = info.resolution;
    doc["copies"] = info.copies;
    doc["eps_end"] = info.eps_end;
    doc["format"] = info.format;
    doc["vertices"] = info.vertices;
    doc["faces"] = info.faces;
    doc["end_loops"] = info.end_loops;
    doc["axis"] = r.axis;
    doc["translation"] = {info.translation.x(), info.translation.y(), info.translation.z()};
    doc["gauss_map"] = {{"max_deg", r.gauss_max_deg}, {"rms_deg", r.gauss_rms_deg},
                        {"interior_vertices", r.interior_vertices}};
    doc["mean_curvature_rms"] = r.mean_curvature_rms;
    doc["symmetry"] = {{"collinearity_S_L", r.collinearity_S_L},
                       {"collinearity_E_S", r.collinearity_E_S},
                       {"orthogonality_rad", r.orthogonality_rad},
                       {"coplanarity", r.coplanarity},
                       {"rotational_invariance", r.rotational_invariance >= 0 ? json(r.rotational_invariance) : json(nullptr)},
                       {"max", r.symmetry_max()}};
    doc["conformality"] = {{"max", r.conformality_max}, {"triangles", r.conformal_triangles}};
    doc["end"] = {{"eta", r.end.eta},
                  {"mu", r.end.mu},
                  {"residual_rms", r.end.residual_rms},
                  {"eta_predicted", r.end.eta_predicted},
                  {"sign_match", r.end.sign_match},
                  {"samples", r.end.samples}};
    doc["integration"] = {{"cycle_residual", d.cycle_residual},
                          {"slit_residual", d.slit_residual},
                          {"path_independence", d.path_independence},
                          {"diameter", d.diameter},
                          {"edges", d.edges}};
    return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << text;
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace periodforge
