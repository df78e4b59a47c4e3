#include "periodforge/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace periodforge {

namespace {

constexpr cplx I{0.0, 1.0};

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

std::string fmt_c(cplx v) {
    return "(" + std::to_string(v.real()) + ", " + std::to_string(v.imag()) + ")";
}

double segment_distance(cplx a, cplx b, cplx p) {
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(a + t * d - p);
}

}  // namespace

void SurfaceParams::validate() const {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("x must lie in (0,1), got " + std::to_string(x));
    if (!(lambda > 1.0)) throw DomainError("lambda must exceed 1, got " + std::to_string(lambda));
    if (!(rho > -std::numbers::pi / 2 && rho <= 0.0))
        throw DomainError("rho must lie in (-pi/2, 0], got " + std::to_string(rho));
    if (!(y.imag() > 0.0)) throw DomainError("Im y must be positive");
    if (!(std::abs(y) < 1.0)) throw DomainError("|y| must be below 1");
    if (!(alpha > 0.0 && alpha < std::numbers::pi))
        throw DomainError("alpha must lie in (0, pi), got " + std::to_string(alpha));
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be positive");
}

cplx eval_Z(cplx z) {
    if (z == 0.0) throw DomainError("Z = z + 1/z has a pole at z = 0");
    return z + 1.0 / z;
}

cplx eval_w2(const SurfaceParams& p, cplx z) {
    if (z == 0.0) throw DomainError("w^2 is evaluated through Z, which has a pole at z = 0");
    detail::Roots<double> r(p.x, p.y, p.alpha);
    detail::Anchored<double> pt{z, 0.0};
    struct Named {
        cplx root;
        const char* name;
    };
    for (const Named& f : {Named{r.x, "Z - X at z = x"}, Named{r.inv_x, "Z - X at z = 1/x"},
                           Named{r.ea, "Z - 2cos(alpha) at z = e^{i alpha}"},
                           Named{r.eam, "Z - 2cos(alpha) at z = e^{-i alpha}"}}) {
        if (pt.minus(f.root) == 0.0) throw PoleError("w^2 has a pole at z = " + fmt_c(z), f.name);
    }
    cplx v = r.w2(pt);
    if (!finite(v)) throw PoleError("w^2 overflowed at z = " + fmt_c(z), "Z - X or Z - 2cos(alpha)");
    return v;
}

cplx eval_dh(const SurfaceParams& p, cplx z) {
    detail::Roots<double> r(p.x, p.y, p.alpha);
    detail::Anchored<double> pt{z, 0.0};
    for (cplx root : {r.y, r.inv_y, r.ybar, r.inv_ybar}) {
        if (pt.minus(root) == 0.0) throw PoleError("dh has a pole at z = " + fmt_c(z), "Z^2 - 2Re(Y)Z + |Y|^2");
    }
    cplx v = r.dh(pt);
    if (!finite(v)) throw PoleError("dh overflowed at z = " + fmt_c(z), "Z^2 - 2Re(Y)Z + |Y|^2");
    return v;
}

FormSample eval_forms(const SurfaceParams& p, const SheetPoint& pt, cplx dz) {
    if (pt.w == 0.0 || !finite(pt.w))
        throw DegeneracyError("g = icw is zero or infinite at z = " + fmt_c(pt.z));
    FormSample s;
    s.dh = eval_dh(p, pt.z) * dz;
    s.g = I * p.c * pt.w;
    s.phi1 = 0.5 * (1.0 / s.g - s.g) * s.dh;
    s.phi2 = 0.5 * (I / s.g + I * s.g) * s.dh;
    s.phi3 = s.dh;
    return s;
}

cplx residue_dh(const SurfaceParams& p) {
    cplx Y = p.Y();
    cplx yb = p.ybar();
    return (std::conj(Y) - 2.0 * std::cos(p.alpha)) / (2.0 * (yb - 1.0 / yb) * Y.imag());
}

std::array<cplx, 7> finite_branch_points(const SurfaceParams& p) {
    cplx y = p.y;
    return {0.0, p.x, 1.0 / p.x, y, 1.0 / y, std::conj(y), 1.0 / std::conj(y)};
}

std::vector<cplx> singular_points(const SurfaceParams& p) {
    auto b = finite_branch_points(p);
    std::vector<cplx> s(b.begin(), b.end());
    s.push_back(std::polar(1.0, p.alpha));
    s.push_back(std::polar(1.0, -p.alpha));
    return s;
}

double default_clearance(const SurfaceParams& p) {
    auto b = finite_branch_points(p);
    double m = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t j = i + 1; j < b.size(); ++j) m = std::min(m, std::abs(b[i] - b[j]));
    return 1e-6 * m;
}

Sheet branch_of(const SurfaceParams& p, cplx z, cplx w) {
    cplx r = std::sqrt(eval_w2(p, z));
    return std::abs(w - r) <= std::abs(w + r) ? Sheet::plus : Sheet::minus;
}

namespace {

// Square-root continuation of square(z) along the polyline. Returns the root
// at each path vertex.
template <class Square>
std::vector<cplx> continue_root(const Square& square, const std::vector<cplx>& sing,
                                const std::vector<cplx>& path, cplx start, double delta,
                                const ContinuationOptions& opt) {
    std::vector<cplx> out;
    if (path.empty()) return out;
    for (size_t k = 0; k < path.size(); ++k) {
        cplx a = path[k];
        cplx b = k + 1 < path.size() ? path[k + 1] : a;
        for (cplx s : sing) {
            if (segment_distance(a, b, s) < delta)
                throw ContinuationError("path passes within " + std::to_string(delta) +
                                        " of the singular point " + fmt_c(s));
        }
    }
    auto dist_sing = [&](cplx z) {
        double d = std::numeric_limits<double>::infinity();
        for (cplx s : sing) d = std::min(d, std::abs(z - s));
        return d;
    };
    auto step = [&](cplx prev, cplx z_next) {
        cplx r = std::sqrt(square(z_next));
        double d1 = std::abs(prev - r), d2 = std::abs(prev + r);
        if (std::abs(d1 - d2) <= 1e-6 * std::max(d1, d2))
            throw StepSizeError("ambiguous continuation step near z = " + fmt_c(z_next) +
                                "; refine the path");
        return d1 < d2 ? r : -r;
    };
    cplx v = start;
    out.push_back(v);
    for (size_t k = 0; k + 1 < path.size(); ++k) {
        cplx a = path[k], b = path[k + 1];
        double len = std::abs(b - a);
        if (opt.refine && len > 0) {
            double t = 0.0;
            while (t < 1.0) {
                cplx z = a + t * (b - a);
                double dt = std::min(1.0 - t, opt.step_fraction * dist_sing(z) / len);
                t = (1.0 - t - dt) < 1e-15 ? 1.0 : t + dt;
                v = step(v, t >= 1.0 ? b : a + t * (b - a));
            }
        } else if (a != b) {
            v = step(v, b);
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<SheetPoint> continue_w(const SurfaceParams& p, const std::vector<cplx>& path,
                                   cplx w_start, const ContinuationOptions& opt) {
    std::vector<SheetPoint> out;
    if (path.empty()) return out;
    const double delta = opt.clearance > 0 ? opt.clearance : default_clearance(p);
    const auto sing = singular_points(p);
    for (cplx s : sing)
        if (std::abs(path.front() - s) < delta)
            throw ContinuationError("path starts within " + std::to_string(delta) + " of " + fmt_c(s));
    cplx w2_0 = eval_w2(p, path.front());
    if (std::abs(w_start * w_start - w2_0) > 1e-8 * std::max(std::abs(w2_0), 1e-300))
        throw DomainError("w_start^2 does not match w^2 at the path start");
    auto ws = continue_root([&](cplx z) { return eval_w2(p, z); }, sing, path, w_start, delta, opt);
    out.reserve(ws.size());
    for (size_t k = 0; k < ws.size(); ++k) out.push_back({path[k], ws[k], branch_of(p, path[k], ws[k])});
    return out;
}

std::vector<cplx> continue_reduced_root(const WeierstrassData& wd, const std::vector<cplx>& path,
                                        cplx u_start, const ContinuationOptions& opt) {
    const auto& p = wd.params();
    const double delta = opt.clearance > 0 ? opt.clearance : default_clearance(p);
    auto b = finite_branch_points(p);
    std::vector<cplx> sing(b.begin(), b.end());
    return continue_root([&](cplx z) { return wd.u2(WeierstrassData::at(z)); }, sing, path, u_start,
                         delta, opt);
}

LimitDataX0 eval_limit_data_x0(double lambda, double rho, double C, cplx zeta) {
    const cplx e = std::polar(1.0, rho);
    const cplx em = -std::polar(1.0, -rho);  // -e^{-i rho}
    const cplx pole_g = cplx(0.0, -lambda);
    if (zeta == pole_g) throw PoleError("G^2 has a pole at zeta = -i lambda", "zeta + i lambda");
    if (zeta == e) throw PoleError("dH has a pole at zeta = e^{i rho}", "zeta - e^{i rho}");
    if (zeta == em) throw PoleError("dH has a pole at zeta = -e^{-i rho}", "zeta + e^{-i rho}");
    LimitDataX0 out;
    cplx d = zeta - pole_g;
    out.G2 = I * C * C * zeta * (zeta - e) * (zeta - em) / (d * d);
    out.dH = 1.0 / ((zeta - e) * (zeta - em));
    if (!finite(out.G2) || !finite(out.dH)) throw PoleError("limit data overflowed", "near pole");
    return out;
}

LimitDataX1 eval_limit_data_x1(cplx y, double alpha, double c, cplx z) {
    if (z == 0.0) throw PoleError("limit data has a pole at z = 0", "Z");
    const cplx Z = z + 1.0 / z;
    const cplx Y = y + 1.0 / y;
    const double ca = std::cos(alpha);
    // Factored: (Z - 2) = (z-1)^2/z and (Z - 2cos a) = (z - e^{ia})(z - e^{-ia})/z.
    const cplx zm1 = z - 1.0;
    const cplx e = (z - std::polar(1.0, alpha)) * (z - std::polar(1.0, -alpha));
    if (zm1 == 0.0) throw PoleError("g^2 has a pole at z = 1", "Z - 2");
    if (e == 0.0) throw PoleError("g^2 has a pole at z = e^{+-i alpha}", "Z - 2cos(alpha)");
    const cplx num = Z * Z - 2.0 * Y.real() * Z + std::norm(Y);
    LimitDataX1 out;
    // z^3 / ((z-1)^2 e^2) = 1/((Z-2)(Z-2cos a)^2)
    out.g2 = -c * c * num * z * z * z / (zm1 * zm1 * e * e);
    if (num == 0.0) throw PoleError("dh has a pole", "Z^2 - 2Re(Y)Z + |Y|^2");
    out.dh = -I * (Z - 2.0 * ca) / (z * num);
    if (!finite(out.g2) || !finite(out.dh)) throw PoleError("limit data overflowed", "near pole");
    return out;
}

WeierstrassData::WeierstrassData(const SurfaceParams& p) : params_(p), roots_(p.x, p.y, p.alpha) {}

cplx WeierstrassData::w_from_u(const Point& z, cplx u) const {
    return u * z.minus(0.0) / roots_.e(z);
}

cplx WeierstrassData::u_from_w(const Point& z, cplx w) const {
    return w * roots_.e(z) / z.minus(0.0);
}

std::array<cplx, 3> WeierstrassData::phi(const Point& z, cplx u) const {
    const double c = params_.c;
    cplx dh_g = roots_.dh_over_w(z, u) / (I * c);  // dh / g
    cplx g_dh = I * c * roots_.w_dh(z, u);        // g dh
    return {0.5 * (dh_g - g_dh), 0.5 * I * (dh_g + g_dh), roots_.dh(z)};
}

std::array<double, 3> WeierstrassData::normal(const Point& z, cplx u) const {
    const double c = params_.c;
    cplx num = I * c * u * z.minus(0.0);
    cplx den = roots_.e(z);
    if (std::abs(num) <= std::abs(den)) {
        cplx g = num / den;
        double n2 = std::norm(g);
        return {2 * g.real() / (n2 + 1), 2 * g.imag() / (n2 + 1), (n2 - 1) / (n2 + 1)};
    }
    cplx q = den / num;
    double n2 = std::norm(q);
    return {2 * q.real() / (1 + n2), -2 * q.imag() / (1 + n2), (1 - n2) / (1 + n2)};
}

double WeierstrassData::conformal_factor(const Point& z, cplx u) const {
    const double c = params_.c;
    double az = std::abs(z.minus(0.0));
    double aq = std::abs(roots_.q(z));
    double ae = std::abs(roots_.e(z));
    double au = std::abs(u);
    return 0.5 * (c * au * az / aq + ae * ae / (c * az * au * aq));
}

}  // namespace periodforge
