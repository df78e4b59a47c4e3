#pragma once

#include <array>
#include <complex>
#include <vector>

#include "periodforge/detail/curve_kernel.hpp"
#include "periodforge/errors.hpp"

namespace periodforge {

using cplx = std::complex<double>;

// One member of the surface family.
struct SurfaceParams {
    double x = 0.5;
    double rho = 0.0;
    double lambda = 2.0;
    cplx y{0.0, 0.5};
    double alpha = 1.5707963267948966;
    double c = 1.0;

    double X() const { return x + 1.0 / x; }
    cplx Y() const { return y + 1.0 / y; }
    cplx ybar() const { return std::conj(y); }

    // Throws DomainError naming the first violated constraint.
    void validate() const;
};

enum class Sheet : int { plus = 1, minus = -1 };

// A point of the double cover. `branch` is relative to the principal square
// root of w^2 at z, so the two tags at one z carry opposite w.
struct SheetPoint {
    cplx z;
    cplx w;
    Sheet branch = Sheet::plus;
};

struct FormSample {
    cplx dh;
    cplx g;
    cplx phi1, phi2, phi3;
};

cplx eval_Z(cplx z);
cplx eval_w2(const SurfaceParams& p, cplx z);
cplx eval_dh(const SurfaceParams& p, cplx z);

// Evaluates g = icw and the three forms against the tangent direction dz.
FormSample eval_forms(const SurfaceParams& p, const SheetPoint& pt, cplx dz = 1.0);

// Closed-form residue of dh at z = ybar.
cplx residue_dh(const SurfaceParams& p);

// 0, x, 1/x, y, 1/y, ybar, 1/ybar (infinity is the eighth branch point).
std::array<cplx, 7> finite_branch_points(const SurfaceParams& p);
// Branch points together with the poles e^{+-i alpha} of w^2.
std::vector<cplx> singular_points(const SurfaceParams& p);
// 1e-6 times the minimum pairwise distance of the finite branch points.
double default_clearance(const SurfaceParams& p);

Sheet branch_of(const SurfaceParams& p, cplx z, cplx w);

struct ContinuationOptions {
    double clearance = -1.0;  // negative selects default_clearance
    bool refine = true;       // insert substeps between path vertices
    double step_fraction = 0.1;
};

// Continues w along the polyline by choosing, at each step, the square root of
// w^2 nearest to the previous value. Returns one point per path vertex.
std::vector<SheetPoint> continue_w(const SurfaceParams& p, const std::vector<cplx>& path,
                                   cplx w_start, const ContinuationOptions& opt = {});

struct LimitDataX0 {
    cplx G2;
    cplx dH;
};
// Limit data in the zeta-chart as x -> 0.
LimitDataX0 eval_limit_data_x0(double lambda, double rho, double C, cplx zeta);

struct LimitDataX1 {
    cplx g2;
    cplx dh;
};
// Limit data as x -> 1: the finite-x data with X replaced by 2.
LimitDataX1 eval_limit_data_x1(cplx y, double alpha, double c, cplx z);

// Precomputed root factors with the cancelled-form evaluators. Points can be
// passed as anchor + offset for exact factors at branch points.
class WeierstrassData {
public:
    explicit WeierstrassData(const SurfaceParams& p);

    const SurfaceParams& params() const { return params_; }
    const detail::Roots<double>& roots() const { return roots_; }

    using Point = detail::Anchored<double>;
    static Point at(cplx z) { return {z, 0.0}; }

    cplx u2(const Point& z) const { return roots_.u2(z); }
    cplx w2(const Point& z) const { return roots_.w2(z); }
    cplx dh(const Point& z) const { return roots_.dh(z); }
    // w = u z / E
    cplx w_from_u(const Point& z, cplx u) const;
    cplx u_from_w(const Point& z, cplx w) const;

    // Coefficients of (phi1, phi2, phi3) with w given through u.
    std::array<cplx, 3> phi(const Point& z, cplx u) const;
    // Unit normal from g at a regular point, or from 1/g near the pole of g.
    std::array<double, 3> normal(const Point& z, cplx u) const;
    // Conformal factor: |dX| = lambda |dz|.
    double conformal_factor(const Point& z, cplx u) const;

private:
    SurfaceParams params_;
    detail::Roots<double> roots_;
};

// Continues the reduced root u = w (Z - 2cos alpha) along the polyline. u is
// regular at e^{+-i alpha}, so only branch points need clearance.
std::vector<cplx> continue_reduced_root(const WeierstrassData& wd, const std::vector<cplx>& path,
                                        cplx u_start, const ContinuationOptions& opt = {});

}  // namespace periodforge
