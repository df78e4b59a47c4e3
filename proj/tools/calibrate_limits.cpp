// Calibration of the frozen limit thresholds. Runs each limit check on the
// regression sequence, extrapolates the measured values with Aitken's delta^2
// (Richardson for a geometric error sequence) and prints the observed final
// error next to ten times that error, the recommended threshold.

#include <cmath>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "periodforge/limits.hpp"

using namespace periodforge;

namespace {

double aitken(double a, double b, double c) {
    double d1 = b - a, d2 = c - b;
    double den = d2 - d1;
    if (den == 0.0) return c;
    return c - d2 * d2 / den;
}

void show(const LimitReport& r) {
    fmt::print("{}\n", r.name);
    for (const auto& row : r.rows)
        fmt::print("  x={:<10.4g} measured={:<22.15g} target={:<22.15g} err={:<11.4e} rate={:.3f}\n", row.x,
                   row.measured, row.target, row.abs_error, row.rate);
    const auto n = r.rows.size();
    if (n >= 3 && r.rule == LimitRule::converge) {
        double lim = aitken(r.rows[n - 3].measured, r.rows[n - 2].measured, r.rows[n - 1].measured);
        double scale = r.relative ? std::abs(r.rows.back().target) : 1.0;
        fmt::print("  extrapolated limit {:.12g} (target {:.12g}, gap {:.3e})\n", lim, r.rows.back().target,
                   std::abs(lim - r.rows.back().target) / scale);
    }
    fmt::print("  final error {:.4e}; recommended threshold {:.1e}; frozen {:.1e}; {}\n\n", r.final_error(),
               10 * r.final_error(), r.threshold, r.passed() ? "pass" : "FAIL");
}

}  // namespace

int main() {
    for (const auto& r : check_I2_I4_limits(0.0, 2.0, {1e-2, 1e-3, 1e-4})) show(r);
    for (const auto& r : check_I2_I4_limits(0.0, 2.0, {1e-2, 3e-3, 1e-3, 3e-4, 1e-4})) show(r);
    for (const auto& r : check_x1_limits(cplx(0.0, 0.5), {0.9, 0.99, 0.999})) show(r);
    for (const auto& r : check_weierstrass_convergence(-0.2, 2.0, 1.0, {1e-2, 1e-3, 1e-4}, default_zeta_test_set()))
        show(r);
    for (const auto& r : check_weierstrass_convergence(0.0, 2.0, 1.0, {1e-2, 1e-3, 1e-4}, default_zeta_test_set()))
        show(r);
    for (double rho : {-0.2, -0.4}) {
        std::vector<double> grid;
        for (double x = 1.6e-2; x > 0.9e-4; x /= 2) grid.insert(grid.begin(), x);
        auto sw = sweep_x(rho, grid, SolveConfig{});
        std::vector<SurfaceParams> curve;
        for (const auto& p : sw.points) curve.push_back(p.params);
        show(check_residue_limit(rho, curve));
    }
    return 0;
}
