#include "cli_commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <regex>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "periodforge/limits.hpp"
#include "periodforge/mesh.hpp"
#include "periodforge/period_solver.hpp"
#include "periodforge/report_io.hpp"

namespace periodforge::cli {

namespace {

struct UsageError : Error {
    using Error::Error;
};

// Command failed after producing its diagnostics; carries the exit code.
struct CommandFailure : Error {
    CommandFailure(const std::string& what, int code) : Error(what), code(code) {}
    int code;
};

struct SolveFlags {
    double x = 0.0;
    double rho = 0.0;
    double lambda_lo = 1.05;
    double lambda_hi = 20.0;
    int scan_points = 64;
    double tol = default_quadrature_tol;
    double tol_root = 1e-10;
    double max_residual = 1e-7;
    std::string out;
};

struct SweepFlags {
    double rho = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
    int steps = 0;
    double lambda_lo = 1.05;
    double lambda_hi = 20.0;
    double tol = default_quadrature_tol;
    std::string out;
};

struct LimitsFlags {
    std::string which;
    double rho = 0.0;
    double lambda = 2.0;
    std::string y = "0.5i";
    double C = 1.0;
    std::vector<double> x_seq;
    std::string out_dir = ".";
};

struct MeshFlags {
    std::string params;
    int resolution = 64;
    int copies = 0;
    std::string format = "obj";
    std::string out;
    std::string report;
    double eps_end = -1.0;
    double grading = 1.5;
};

struct VerifyFlags {
    std::string params;
    int panels = 1;
    double tol = default_quadrature_tol;
    double max_residual = 1e-7;
    std::string out;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-")
        out << text;
    else
        write_text_file(path, text);
}

void require_x(double x, const char* flag) {
    if (!(x > 0.0 && x < 1.0)) throw UsageError(fmt::format("{} must lie in (0, 1), got {}", flag, x));
}

void require_rho(double rho) {
    if (!(rho > -std::numbers::pi / 2 && rho <= 0.0))
        throw UsageError(fmt::format("--rho must lie in (-pi/2, 0], got {}", rho));
}

SolveConfig solve_config(double x, double rho, double lo, double hi, double tol) {
    SolveConfig c;
    c.x = x;
    c.rho = rho;
    c.lambda_lo = lo;
    c.lambda_hi = hi;
    c.tol_quad = tol;
    return c;
}

void check_residuals(const PeriodReport& r, double max_residual, std::ostream& err) {
    const double worst = r.max_period_residual();
    if (worst > max_residual || r.residue_reality > max_residual)
        throw CommandFailure(fmt::format("period residual {} exceeds {} (residue reality {})", worst, max_residual,
                                         r.residue_reality),
                             exit_accuracy);
    err << fmt::format("max period residual {:.3g}, residue reality {:.3g}\n", worst, r.residue_reality);
}

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
    require_x(f.x, "--x");
    require_rho(f.rho);
    if (!(f.lambda_lo > 1.0 && f.lambda_lo < f.lambda_hi)) throw UsageError("need 1 < --lambda-lo < --lambda-hi");
    if (!(f.tol > 0 && f.tol_root > 0)) throw UsageError("tolerances must be positive");
    SolveConfig cfg = solve_config(f.x, f.rho, f.lambda_lo, f.lambda_hi, f.tol);
    cfg.scan_points = f.scan_points;
    cfg.tol_root = f.tol_root;
    const SurfaceParams p = solve_lambda(cfg);
    const PeriodReport r = verify_periods(p, VerifyOptions{f.tol});
    emit(f.out, params_json(p, r, f.tol), out);
    err << fmt::format("lambda = {}, c = {}\n", p.lambda, p.c);
    check_residuals(r, f.max_residual, err);
    return exit_ok;
}

int cmd_sweep(const SweepFlags& f, std::ostream& out, std::ostream& err) {
    require_x(f.x_min, "--x-min");
    require_rho(f.rho);
    if (f.steps < 1) throw UsageError("--steps must be at least 1");
    if (f.steps > 1) {
        require_x(f.x_max, "--x-max");
        if (!(f.x_min < f.x_max)) throw UsageError("need --x-min < --x-max");
    }
    if (!(f.lambda_lo > 1.0 && f.lambda_lo < f.lambda_hi)) throw UsageError("need 1 < --lambda-lo < --lambda-hi");
    std::vector<double> grid;
    for (int k = 0; k < f.steps; ++k)
        grid.push_back(k == 0 ? f.x_min
                       : k + 1 == f.steps
                           ? f.x_max
                           : f.x_min * std::pow(f.x_max / f.x_min, static_cast<double>(k) / (f.steps - 1)));
    const SolveConfig cfg = solve_config(f.x_min, f.rho, f.lambda_lo, f.lambda_hi, f.tol);
    SweepResult s;
    try {
        s = sweep_x(f.rho, grid, cfg);
    } catch (const BracketError& e) {
        s.truncated = true;
        s.failed_x = grid.front();
        s.failure = e.what();
        emit(f.out, sweep_csv(f.rho, s), out);
        throw;
    }
    emit(f.out, sweep_csv(f.rho, s), out);
    if (s.truncated) {
        err << fmt::format("sweep truncated at x = {}: {}\n", s.failed_x, s.failure);
        return exit_bracket;
    }
    return exit_ok;
}

std::string slug(const std::string& name) {
    std::string s;
    for (char ch : name) {
        if (std::isalnum(static_cast<unsigned char>(ch)))
            s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        else if (!s.empty() && s.back() != '_')
            s += '_';
    }
    while (!s.empty() && s.back() == '_') s.pop_back();
    return s;
}

int cmd_limits(const LimitsFlags& f, std::ostream& out, std::ostream& err) {
    std::vector<LimitReport> reports;
    std::vector<double> xs = f.x_seq;
    auto defaults = [&](std::vector<double> d) {
        if (xs.empty()) xs = std::move(d);
        for (double x : xs) require_x(x, "--x-seq");
    };
    if (f.which == "x0") {
        defaults({1e-2, 1e-3, 1e-4});
        reports = check_I2_I4_limits(f.rho, f.lambda, xs);
    } else if (f.which == "x1") {
        const auto y = parse_complex(f.y);
        if (!y) throw UsageError("cannot parse --y '" + f.y + "'");
        defaults({0.9, 0.99, 0.999});
        reports = check_x1_limits(*y, xs);
    } else if (f.which == "wdata") {
        defaults({1e-2, 1e-3, 1e-4});
        reports = check_weierstrass_convergence(f.rho, f.lambda, f.C, xs, default_zeta_test_set());
    } else if (f.which == "residue") {
        require_rho(f.rho);
        defaults({1e-3, 2e-3, 4e-3, 8e-3});
        std::sort(xs.begin(), xs.end());
        SolveConfig cfg;
        const auto s = sweep_x(f.rho, xs, cfg);
        if (s.truncated) throw BracketError(fmt::format("solution curve ends at x = {}: {}", s.failed_x, s.failure));
        std::vector<SurfaceParams> curve;
        for (const auto& pt : s.points) curve.push_back(pt.params);
        reports.push_back(check_residue_limit(f.rho, curve));
    } else {
        throw UsageError("unknown --which '" + f.which + "' (expected x0, x1, wdata or residue)");
    }

    std::filesystem::create_directories(f.out_dir);
    const LimitReport* worst = nullptr;
    double worst_ratio = -1.0;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& r = reports[k];
        const std::string path = (std::filesystem::path(f.out_dir) / fmt::format("limits_{}_{}_{}.csv", f.which, k,
                                                                                    slug(r.name)))
                                     .string();
        write_text_file(path, limit_csv(r));
        out << fmt::format("{} {}: final error {:.3g} (threshold {:.3g}) -> {}\n", r.passed() ? "PASS" : "FAIL",
                           r.name, r.final_error(), r.threshold, path);
        if (!r.passed()) {
            const double ratio = std::isfinite(r.final_error()) ? r.final_error() / r.threshold : HUGE_VAL;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst = &r;
            }
        }
    }
    if (worst) {
        err << fmt::format("threshold failure; worst offender: {} (final error {:.3g}, threshold {:.3g}{})\n",
                           worst->name, worst->final_error(), worst->threshold,
                           worst->decreasing() ? "" : ", not decreasing");
        return exit_threshold;
    }
    return exit_ok;
}

int cmd_mesh(const MeshFlags& f, std::ostream& out, std::ostream& err) {
    if (f.resolution < 8) throw UsageError("--resolution must be at least 8");
    if (f.copies < 0) throw UsageError("--copies must be non-negative");
    if (f.out.empty()) throw UsageError("--out is required");
    const MeshFormat format = f.format == "ply" ? MeshFormat::ply : MeshFormat::obj;
    const SurfaceParams p = read_params_file(f.params);
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw CommandFailure(f.params + ": inconsistent parameters: " + e.what(), exit_accuracy);
    }
    const DomainGrid grid = build_grid(p, f.resolution, f.eps_end, f.grading);
    const SurfaceMesh half = integrate_surface(p, grid);
    const SurfaceMesh piece = assemble_piece(half, p);
    const SurfaceMesh surface = tile_surface(piece, f.copies);
    const DiscreteReport rep = discrete_checks(piece, p);
    export_mesh(surface, format, f.out);

    MeshRunInfo info;
    info.resolution = f.resolution;
    info.copies = f.copies;
    info.eps_end = grid.eps_end;
    info.format = f.format;
    info.vertices = surface.size();
    info.faces = surface.faces.size();
    info.end_loops = count_end_loops(piece);
    info.translation = tiling_translation(piece);
    const std::string report = f.report.empty() ? f.out + ".json" : f.report;
    write_text_file(report, mesh_report_json(rep, half.diagnostics, info));
    out << fmt::format("wrote {} ({} vertices, {} faces) and {}\n", f.out, info.vertices, info.faces, report);
    err << fmt::format("axis {}, symmetry residual {:.3g}, gauss max {:.3g} deg, H rms {:.3g}\n", rep.axis,
                       rep.symmetry_max(), rep.gauss_max_deg, rep.mean_curvature_rms);
    return exit_ok;
}

int cmd_verify(const VerifyFlags& f, std::ostream& out, std::ostream& err) {
    if (f.panels < 1) throw UsageError("--panels must be at least 1");
    const SurfaceParams p = read_params_file(f.params);
    VerifyOptions opt;
    opt.tol = f.tol;
    opt.panels = f.panels;
    const PeriodReport r = verify_periods(p, opt);
    emit(f.out, params_json(p, r, f.tol), out);
    check_residuals(r, f.max_residual, err);
    return exit_ok;
}

}  // namespace

std::optional<cplx> parse_complex(const std::string& text) {
    static const std::regex full(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i)?\s*$)");
    static const std::regex imag_only(R"(^\s*([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*i\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, imag_only)) {
        double v = m[2].matched ? std::stod(m[2].str()) : 1.0;
        return cplx(0.0, m[1].str() == "-" ? -v : v);
    }
    if (std::regex_match(text, m, full) && m[1].matched) {
        const double re = std::stod(m[1].str());
        double im = 0.0;
        if (m[2].matched) {
            im = m[3].matched ? std::stod(m[3].str()) : 1.0;
            if (m[2].str() == "-") im = -im;
        }
        return cplx(re, im);
    }
    return std::nullopt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Period solving, limit checks and meshes for the doubly periodic minimal surface family"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version_string);

    SolveFlags sf;
    auto* solve = app.add_subcommand("solve", "solve the period problem for lambda and c");
    solve->add_option("--x", sf.x, "end parameter in (0, 1)")->required();
    solve->add_option("--rho", sf.rho, "angle in (-pi/2, 0]");
    solve->add_option("--lambda-lo", sf.lambda_lo, "lower end of the lambda scan");
    solve->add_option("--lambda-hi", sf.lambda_hi, "upper end of the lambda scan");
    solve->add_option("--scan-points", sf.scan_points, "points of the bracket scan");
    solve->add_option("--tol", sf.tol, "quadrature tolerance");
    solve->add_option("--tol-root", sf.tol_root, "root tolerance in lambda");
    solve->add_option("--max-residual", sf.max_residual, "largest accepted period residual");
    solve->add_option("--out", sf.out, "params JSON path (stdout if omitted)");

    SweepFlags wf;
    auto* sweep = app.add_subcommand("sweep", "solve along a geometric x grid");
    sweep->add_option("--rho", wf.rho, "angle in (-pi/2, 0]");
    sweep->add_option("--x-min", wf.x_min, "smallest x")->required();
    sweep->add_option("--x-max", wf.x_max, "largest x");
    sweep->add_option("--steps", wf.steps, "number of x values")->required();
    sweep->add_option("--lambda-lo", wf.lambda_lo, "lower end of the lambda scan");
    sweep->add_option("--lambda-hi", wf.lambda_hi, "upper end of the lambda scan");
    sweep->add_option("--tol", wf.tol, "quadrature tolerance");
    sweep->add_option("--out", wf.out, "CSV path (stdout if omitted)");

    LimitsFlags lf;
    auto* limits = app.add_subcommand("limits", "convergence checks toward x = 0 and x = 1");
    limits->add_option("--which", lf.which, "x0, x1, wdata or residue")->required();
    limits->add_option("--rho", lf.rho, "angle");
    limits->add_option("--lambda", lf.lambda, "lambda of the x -> 0 regime");
    limits->add_option("--y", lf.y, "branch point y of the x -> 1 regime, e.g. 0.5i");
    limits->add_option("--C", lf.C, "scale of the limit Weierstrass data");
    limits->add_option("--x-seq", lf.x_seq, "x sequence")->delimiter(',');
    limits->add_option("--out-dir", lf.out_dir, "directory for the CSV reports");

    MeshFlags mf;
    auto* mesh = app.add_subcommand("mesh", "integrate, assemble, tile and export the surface");
    mesh->add_option("--params", mf.params, "params JSON from solve")->required();
    mesh->add_option("--resolution", mf.resolution, "grid resolution (>= 8)");
    mesh->add_option("--copies", mf.copies, "fundamental regions on each side");
    mesh->add_option("--format", mf.format, "obj or ply")->check(CLI::IsMember({"obj", "ply"}));
    mesh->add_option("--out", mf.out, "mesh path")->required();
    mesh->add_option("--report", mf.report, "sidecar JSON path (default <out>.json)");
    mesh->add_option("--eps-end", mf.eps_end, "radius of the cut around the end (default 0.05 of the clearance)");
    mesh->add_option("--grading", mf.grading, "geometric grading ratio");

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "recompute the period residuals of a params file");
    verify->add_option("--params", vf.params, "params JSON")->required();
    verify->add_option("--panels", vf.panels, "sub-panels per boundary piece");
    verify->add_option("--tol", vf.tol, "quadrature tolerance");
    verify->add_option("--max-residual", vf.max_residual, "largest accepted period residual");
    verify->add_option("--out", vf.out, "JSON path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (solve->parsed()) return cmd_solve(sf, out, err);
        if (sweep->parsed()) return cmd_sweep(wf, out, err);
        if (limits->parsed()) return cmd_limits(lf, out, err);
        if (mesh->parsed()) return cmd_mesh(mf, out, err);
        return cmd_verify(vf, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const CommandFailure& e) {
        err << "error: " << e.what() << "\n";
        return e.code;
    } catch (const BracketError& e) {
        err << "bracket failure: " << e.what() << "\n";
        return exit_bracket;
    } catch (const AccuracyError& e) {
        err << "accuracy failure: " << e.what() << "\n";
        return exit_accuracy;
    } catch (const InvalidSolutionError& e) {
        err << "invalid solution: " << e.what() << "\n";
        return exit_accuracy;
    } catch (const SymmetryError& e) {
        err << "symmetry failure: " << e.what() << "\n";
        return exit_accuracy;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

}  // namespace periodforge::cli
