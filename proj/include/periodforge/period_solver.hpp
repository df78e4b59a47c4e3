#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "periodforge/curve.hpp"
#include "periodforge/quadrature.hpp"

namespace periodforge {

struct SolveConfig {
    double rho = 0.0;
    double x = 1e-2;
    double lambda_lo = 1.05;
    double lambda_hi = 20.0;
    int scan_points = 64;
    double tol_root = 1e-10;
    double tol_quad = default_quadrature_tol;
    int max_iter = 200;
};

struct PeriodReport {
    std::array<double, 3> period_residuals{};
    double residue_reality = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double alpha_consistency = 0.0;
    double loop_scale = 0.0;  // sum of |Re phi_k| integrals along the loop

    double max_period_residual() const;
};

struct VerifyOptions {
    double tol = default_quadrature_tol;
    int panels = 1;             // sub-panels per boundary piece
    double indentation = 1e-3;  // relative indentation of the transport loop
};

// ybar = x e^{i rho} / (e^{i rho} + i lambda)
cplx ybar_of(double x, double rho, double lambda);
// Interior of the lower half disk.
bool in_lower_half_disk(cplx z);

double solve_alpha(cplx y, double tol = default_quadrature_tol);
double solve_alpha(const SurfaceParams& p, double tol = default_quadrature_tol);

struct C12 {
    double c1 = 0.0;
    double c2 = 0.0;
    IntegralSet integrals;
};
C12 compute_c1_c2(const SurfaceParams& p, double tol = default_quadrature_tol);

// Parameters at (x, rho, lambda) with y and alpha filled in; c left at 1.
SurfaceParams params_at(double x, double rho, double lambda, double tol = default_quadrature_tol);

// h(lambda) = C1 - C2 with C_j = x lambda c_j.
struct HSample {
    double lambda = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double h() const { return C1 - C2; }
};
HSample h_of_lambda(double x, double rho, double lambda, double tol = default_quadrature_tol);

// Geometric grid of `points` values in [lo, hi].
std::vector<double> lambda_grid(double lo, double hi, int points);
// First sign change of h over the grid, as (lo, hi); empty if none.
std::optional<std::pair<HSample, HSample>> find_bracket(const SolveConfig& cfg);

SurfaceParams solve_lambda(const SolveConfig& cfg);
// Root refinement inside a known bracket.
SurfaceParams solve_lambda_in(const SolveConfig& cfg, const HSample& lo, const HSample& hi);

PeriodReport verify_periods(const SurfaceParams& p, const VerifyOptions& opt = {});

struct SweepPoint {
    SurfaceParams params;
    double c1 = 0.0;
    double c2 = 0.0;
    PeriodReport report;
};
struct SweepResult {
    std::vector<SweepPoint> points;
    bool truncated = false;
    double failed_x = 0.0;
    std::string failure;
};
SweepResult sweep_x(double rho, const std::vector<double>& x_grid, const SolveConfig& cfg);

}  // namespace periodforge
