#pragma once

#include <array>
#include <string>

#include "periodforge/curve.hpp"

namespace periodforge {

enum class PathKind { real_segment, unit_circle_arc };

// Modulus densities. dh_plain and dh_cos_weight are the integrands of the
// alpha ratio and are only meaningful on the unit-circle arc.
enum class Density { abs_dh_over_w, abs_w_dh, dh_plain, dh_cos_weight };

enum class QuadratureMethod { gauss_kronrod, double_exponential };

struct PathSpec {
    PathKind kind = PathKind::real_segment;
    double a = 0.0;
    double b = 0.0;
    Density density = Density::abs_w_dh;
    // local exponent at each endpoint: -0.5 at a branch point, 0 otherwise
    double exponent_a = 0.0;
    double exponent_b = 0.0;
};

// Builds a spec and flags endpoints that sit on the branch points 0 or x.
PathSpec make_path(const SurfaceParams& p, PathKind kind, double a, double b, Density density);

struct QuadratureOptions {
    QuadratureMethod method = QuadratureMethod::gauss_kronrod;
    bool allow_extended = true;
    int max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool extended = false;
};

inline constexpr double default_quadrature_tol = 1e-10;

QuadratureResult integrate_path(const SurfaceParams& p, const PathSpec& spec, double tol,
                                const QuadratureOptions& opt = {});

struct IntegralSet {
    std::array<double, 8> I{};    // I[0] is I1
    double A_num = 0.0;
    double A_den = 0.0;
    std::array<double, 10> err{};  // I1..I8, A_num, A_den

    double operator()(int k) const { return I.at(k - 1); }
};

// The path behind I_k (1-based).
PathSpec integral_path(const SurfaceParams& p, int k);

IntegralSet integral_set(const SurfaceParams& p, double tol = default_quadrature_tol,
                         const QuadratureOptions& opt = {});

// Only the two alpha integrals; they depend on y alone.
std::array<QuadratureResult, 2> alpha_integrals(cplx y, double tol = default_quadrature_tol,
                                                const QuadratureOptions& opt = {});

std::string to_string(Density d);

// Reduced root u = w (Z - 2cos alpha) at a regular point; it fixes the sheet
// for integration of the forms along a nearby path.
struct BranchRef {
    cplx z;
    cplx u;
};

struct FormIntegral {
    std::array<cplx, 3> value{};  // integral of (phi1, phi2, phi3); Re is the displacement
    double error = 0.0;
};

// Integral of the forms along the straight segment za -> zb. Endpoints flagged
// singular are branch points and get the square-root substitution. u along the
// segment is the square root of u^2 rotated so that its cut stays away from
// the reference value.
FormIntegral integrate_forms_segment(const WeierstrassData& wd, cplx za, cplx zb, bool sing_a, bool sing_b,
                                     const BranchRef& ref, double tol = 1e-13);

// Integral of the forms along z = e^{-it}, t0 <= t <= t1.
FormIntegral integrate_forms_lower_arc(const WeierstrassData& wd, double t0, double t1, const BranchRef& ref,
                                       double tol = 1e-13);

}  // namespace periodforge
