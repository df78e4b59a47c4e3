#include "periodforge/period_solver.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>

namespace periodforge {

double PeriodReport::max_period_residual() const {
    return std::max({std::abs(period_residuals[0]), std::abs(period_residuals[1]), std::abs(period_residuals[2])});
}

cplx ybar_of(double x, double rho, double lambda) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("x must lie in (0,1)");
    if (!(lambda > 1.0)) throw DomainError("lambda must exceed 1");
    const cplx e = std::polar(1.0, rho);
    return x * e / (e + cplx(0.0, lambda));
}

bool in_lower_half_disk(cplx z) { return std::abs(z) < 1.0 && z.imag() < 0.0; }

double solve_alpha(cplx y, double tol) {
    auto a = alpha_integrals(y, tol);
    if (!(a[1].value > 0.0)) throw NoSolutionError("alpha denominator integral is not positive");
    double ratio = a[0].value / a[1].value;
    if (!(std::abs(ratio) < 1.0)) throw NoSolutionError("cos(alpha) ratio " + std::to_string(ratio) + " is outside (-1, 1)");
    return std::acos(ratio);
}

double solve_alpha(const SurfaceParams& p, double tol) { return solve_alpha(p.y, tol); }

C12 compute_c1_c2(const SurfaceParams& p, double tol) {
    C12 out;
    out.integrals = integral_set(p, tol);
    const auto& s = out.integrals;
    double den1 = s(4) - s(3);
    double den2 = s(7) - s(8);
    if (std::abs(den1) < 1e3 * (s.err[3] + s.err[2]))
        throw IndeterminateError("I4 - I3 vanishes within quadrature error");
    if (std::abs(den2) < 1e3 * (s.err[6] + s.err[7]))
        throw IndeterminateError("I7 - I8 vanishes within quadrature error");
    out.c1 = (s(1) + s(2)) / den1;
    out.c2 = (s(5) - s(6)) / den2;
    return out;
}

SurfaceParams params_at(double x, double rho, double lambda, double tol) {
    cplx yb = ybar_of(x, rho, lambda);
    if (!in_lower_half_disk(yb))
        throw DomainError("ybar lies outside the lower half disk for x = " + std::to_string(x));
    SurfaceParams p;
    p.x = x;
    p.rho = rho;
    p.lambda = lambda;
    p.y = std::conj(yb);
    p.alpha = solve_alpha(p.y, tol);
    p.c = 1.0;
    p.validate();
    return p;
}

HSample h_of_lambda(double x, double rho, double lambda, double tol) {
    SurfaceParams p = params_at(x, rho, lambda, tol);
    C12 c = compute_c1_c2(p, tol);
    return {lambda, x * lambda * c.c1, x * lambda * c.c2};
}

std::vector<double> lambda_grid(double lo, double hi, int points) {
    std::vector<double> g;
    if (points <= 1) return {lo};
    for (int k = 0; k < points; ++k) g.push_back(lo * std::pow(hi / lo, double(k) / (points - 1)));
    g.back() = hi;
    return g;
}

std::optional<std::pair<HSample, HSample>> find_bracket(const SolveConfig& cfg) {
    if (!(cfg.lambda_lo > 1.0 && cfg.lambda_lo < cfg.lambda_hi)) throw DomainError("lambda bracket must satisfy 1 < lo < hi");
    std::optional<HSample> prev;
    for (double lam : lambda_grid(cfg.lambda_lo, cfg.lambda_hi, cfg.scan_points)) {
        HSample s;
        try {
            s = h_of_lambda(cfg.x, cfg.rho, lam, cfg.tol_quad);
        } catch (const DomainError&) {
            prev.reset();
            continue;
        } catch (const IndeterminateError&) {
            prev.reset();
            continue;
        }
        if (prev && (prev->h() < 0) != (s.h() < 0)) return std::make_pair(*prev, s);
        prev = s;
    }
    return std::nullopt;
}

SurfaceParams solve_lambda_in(const SolveConfig& cfg, const HSample& lo, const HSample& hi) {
    if ((lo.h() < 0) == (hi.h() < 0)) throw BracketError("h(lambda) = C1 - C2 has no sign change in the bracket");
    HSample best = std::abs(lo.h()) < std::abs(hi.h()) ? lo : hi;
    auto f = [&](double lam) {
        HSample s = h_of_lambda(cfg.x, cfg.rho, lam, cfg.tol_quad);
        if (std::abs(s.h()) < std::abs(best.h())) best = s;
        return s.h();
    };
    auto stop = [&](double a, double b) {
        return std::abs(b - a) <= 4e-16 * std::max(std::abs(a), std::abs(b)) || std::abs(best.h()) <= 0.01 * cfg.tol_root;
    };
    std::uintmax_t iters = static_cast<std::uintmax_t>(cfg.max_iter);
    if (std::abs(best.h()) > 0.01 * cfg.tol_root)
        boost::math::tools::toms748_solve(f, lo.lambda, hi.lambda, lo.h(), hi.h(), stop, iters);
    if (!(std::abs(best.h()) < cfg.tol_root))
        throw AccuracyError("root refinement stalled with |C1 - C2| = " + std::to_string(std::abs(best.h())),
                            std::abs(best.h()));
    SurfaceParams p = params_at(cfg.x, cfg.rho, best.lambda, cfg.tol_quad);
    if (!(best.C1 > 0.0 && best.C2 > 0.0))
        throw InvalidSolutionError("root has c^2 <= 0 (C1 = " + std::to_string(best.C1) + ")");
    p.c = std::sqrt(best.C1 / (cfg.x * best.lambda));
    return p;
}

SurfaceParams solve_lambda(const SolveConfig& cfg) {
    if (!(cfg.x > 0.0 && cfg.x < 1.0)) throw DomainError("x must lie in (0,1)");
    if (!(cfg.tol_root > 0 && cfg.tol_quad > 0)) throw DomainError("tolerances must be positive");
    auto br = find_bracket(cfg);
    if (!br)
        throw BracketError("no sign change of C1 - C2 for lambda in [" + std::to_string(cfg.lambda_lo) + ", " +
                           std::to_string(cfg.lambda_hi) + "] at x = " + std::to_string(cfg.x) +
                           ", rho = " + std::to_string(cfg.rho));
    return solve_lambda_in(cfg, br->first, br->second);
}

namespace {

std::vector<cplx> transport_path(const SurfaceParams& p, double indentation) {
    const double x = p.x;
    const double r = indentation * std::min(x, 1.0 - x);
    std::vector<cplx> path{x / 2, x - r};
    for (int k = 1; k < 16; ++k) path.push_back(x + r * std::polar(1.0, std::numbers::pi * (1.0 + k / 16.0)));
    path.push_back(x + r);
    path.push_back(0.5 * (x + 1.0));
    path.push_back(1.0);
    for (int k = 1; k < 64; ++k) path.push_back(std::polar(1.0, -std::numbers::pi * k / 64.0));
    path.push_back(-1.0);
    path.push_back(-0.5);
    return path;
}

}  // namespace

PeriodReport verify_periods(const SurfaceParams& p, const VerifyOptions& opt) {
    p.validate();
    WeierstrassData wd(p);
    const double x = p.x;
    PeriodReport rep;

    // principal sheet: u > 0 on (0, x)
    const cplx zA = x / 2;
    cplx uA = std::sqrt(wd.u2(WeierstrassData::at(zA)));
    if (uA.real() < 0) uA = -uA;
    auto path = transport_path(p, opt.indentation);
    auto us = continue_reduced_root(wd, path, uA);
    auto value_at = [&](cplx z) {
        for (size_t k = 0; k < path.size(); ++k)
            if (path[k] == z) return us[k];
        throw ContinuationError("transport path misses a reference point");
    };
    const BranchRef refA{zA, uA};
    const BranchRef refB{0.5 * (x + 1.0), value_at(0.5 * (x + 1.0))};
    const BranchRef refC{std::polar(1.0, -std::numbers::pi / 2), value_at(std::polar(1.0, -std::numbers::pi / 2))};
    const BranchRef refD{-0.5, value_at(-0.5)};

    const int n = std::max(1, opt.panels);
    std::array<double, 3> total{};
    std::array<double, 3> scale{};
    const double tol = std::min(opt.tol, 1e-12);
    auto add = [&](const FormIntegral& fi) {
        for (int k = 0; k < 3; ++k) {
            total[k] += fi.value[k].real();
            scale[k] += std::abs(fi.value[k].real());
        }
    };
    auto segment = [&](double a, double b, bool sa, bool sb, const BranchRef& ref) {
        for (int j = 0; j < n; ++j) {
            double t0 = a + (b - a) * j / n, t1 = j + 1 == n ? b : a + (b - a) * (j + 1) / n;
            add(integrate_forms_segment(wd, t0, t1, sa && j == 0, sb && j + 1 == n, ref, tol));
        }
    };
    segment(0.0, x, true, true, refA);
    segment(x, 1.0, true, false, refB);
    for (int j = 0; j < n; ++j)
        add(integrate_forms_lower_arc(wd, std::numbers::pi * j / n, std::numbers::pi * (j + 1) / n, refC, tol));
    segment(-1.0, 0.0, false, true, refD);

    rep.period_residuals = total;
    rep.loop_scale = scale[0] + scale[1] + scale[2];
    rep.residue_reality = std::abs((cplx(0.0, 2.0 * std::numbers::pi) * residue_dh(p)).real());
    rep.alpha_consistency = std::abs(std::cos(p.alpha) - 2.0 * p.y.real() / (1.0 + std::norm(p.y)));
    C12 c = compute_c1_c2(p, opt.tol);
    rep.c1 = c.c1;
    rep.c2 = c.c2;
    return rep;
}

SweepResult sweep_x(double rho, const std::vector<double>& x_grid, const SolveConfig& cfg) {
    SweepResult out;
    if (!std::is_sorted(x_grid.begin(), x_grid.end())) throw DomainError("x grid must be sorted ascending");
    for (size_t k = 0; k < x_grid.size(); ++k) {
        SolveConfig c = cfg;
        c.rho = rho;
        c.x = x_grid[k];
        SurfaceParams sol;
        try {
            if (k == 0) {
                sol = solve_lambda(c);
            } else {
                const double prev = out.points.back().params.lambda;
                std::optional<std::pair<HSample, HSample>> br;
                for (double w : {1.1, 1.3, 1.8}) {
                    double lo = std::max(c.lambda_lo, prev / w), hi = std::min(c.lambda_hi, prev * w);
                    HSample a = h_of_lambda(c.x, rho, lo, c.tol_quad), b = h_of_lambda(c.x, rho, hi, c.tol_quad);
                    if ((a.h() < 0) != (b.h() < 0)) {
                        br = std::make_pair(a, b);
                        break;
                    }
                }
                sol = br ? solve_lambda_in(c, br->first, br->second) : solve_lambda(c);
            }
        } catch (const Error& e) {
            if (k == 0) throw;
            out.truncated = true;
            out.failed_x = x_grid[k];
            out.failure = e.what();
            break;
        }
        SweepPoint pt;
        pt.params = sol;
        pt.report = verify_periods(sol, VerifyOptions{c.tol_quad});
        pt.c1 = pt.report.c1;
        pt.c2 = pt.report.c2;
        out.points.push_back(pt);
    }
    return out;
}

}  // namespace periodforge
