#include "periodforge/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "periodforge/gauss_kronrod.hpp"
#include "periodforge/parallel.hpp"

namespace periodforge {

namespace {

constexpr double kRelTol = 1e-12;

bool is_branch_endpoint(const SurfaceParams& p, double t) { return t == 0.0 || t == p.x; }

template <class T>
T real_density(const detail::Roots<T>& r, Density d, const detail::Anchored<T>& pt) {
    switch (d) {
        case Density::abs_dh_over_w: return r.abs_dh_over_w(pt);
        case Density::abs_w_dh: return r.abs_w_dh(pt);
        default: throw DomainError("density " + to_string(d) + " is only defined on the unit-circle arc");
    }
}

template <class T>
T arc_density(const detail::Roots<T>& r, Density d, T t) {
    using C = std::complex<T>;
    switch (d) {
        case Density::abs_dh_over_w: return r.abs_dh_over_w({C(std::cos(t), std::sin(t)), C(0)});
        case Density::abs_w_dh: return r.abs_w_dh({C(std::cos(t), std::sin(t)), C(0)});
        case Density::dh_plain:
        case Density::dh_cos_weight: {
            C Y = r.y + r.inv_y;
            T ct = std::cos(t);
            T den = std::norm(T(2) * ct - Y);
            return d == Density::dh_plain ? T(1) / den : ct / den;
        }
    }
    return T(0);
}

// One smooth piece: integral over v in [0, 1] or [a, b].
struct Piece {
    bool substituted;  // t = anchor + sign * len * v^2
    double anchor;
    double sign;
    double len;
    double a, b;  // plain range when not substituted
};

std::vector<Piece> real_pieces(const PathSpec& s) {
    const bool sa = s.exponent_a != 0.0, sb = s.exponent_b != 0.0;
    if (sa && sb) {
        double m = 0.5 * (s.a + s.b);
        return {Piece{true, s.a, 1.0, m - s.a, 0, 1}, Piece{true, s.b, -1.0, s.b - m, 0, 1}};
    }
    if (sa) return {Piece{true, s.a, 1.0, s.b - s.a, 0, 1}};
    if (sb) return {Piece{true, s.b, -1.0, s.b - s.a, 0, 1}};
    return {Piece{false, s.a, 1.0, 0, s.a, s.b}};
}

template <class T>
GKResult<T, T> gk_real_piece(const detail::Roots<T>& r, Density d, const Piece& pc, T abs_tol, int max_iv) {
    using C = std::complex<T>;
    const T anchor = T(pc.anchor);
    if (pc.substituted) {
        const T sl = T(pc.sign) * T(pc.len);
        const T two_len = T(2) * T(pc.len);
        auto f = [&](T v) -> T {
            if (v == T(0)) return T(0);
            detail::Anchored<T> pt{C(anchor), C(sl * v * v)};
            return real_density(r, d, pt) * two_len * v;
        };
        return gauss_kronrod<T, T>(f, T(0), T(1), abs_tol, T(kRelTol), max_iv, [](const T& x) { return std::abs(x); });
    }
    auto f = [&](T t) -> T {
        detail::Anchored<T> pt{C(anchor), C(t - anchor)};
        return real_density(r, d, pt);
    };
    return gauss_kronrod<T, T>(f, T(pc.a), T(pc.b), abs_tol, T(kRelTol), max_iv, [](const T& x) { return std::abs(x); });
}

template <class T>
QuadratureResult gk_path(const SurfaceParams& p, const PathSpec& s, double tol, int max_iv) {
    detail::Roots<T> r(p.x, p.y, p.alpha);
    QuadratureResult out;
    T value = 0, err = 0;
    bool ok = true;
    if (s.kind == PathKind::real_segment) {
        auto pieces = real_pieces(s);
        for (const auto& pc : pieces) {
            auto res = gk_real_piece<T>(r, s.density, pc, T(tol / pieces.size()), max_iv);
            value += res.value;
            err += res.error;
            out.evaluations += res.evaluations;
            ok = ok && res.converged;
        }
    } else {
        std::vector<double> cuts{s.a};
        if (s.a < p.alpha && p.alpha < s.b) cuts.push_back(p.alpha);
        cuts.push_back(s.b);
        for (size_t k = 0; k + 1 < cuts.size(); ++k) {
            auto f = [&](T t) { return arc_density(r, s.density, t); };
            auto res = gauss_kronrod<T, T>(f, T(cuts[k]), T(cuts[k + 1]), T(tol / (cuts.size() - 1)), T(kRelTol),
                                           max_iv, [](const T& x) { return std::abs(x); });
            value += res.value;
            err += res.error;
            out.evaluations += res.evaluations;
            ok = ok && res.converged;
        }
    }
    out.value = static_cast<double>(value);
    out.error = static_cast<double>(err);
    if (!ok && out.error <= tol) ok = true;
    if (!ok) out.error = std::max(out.error, 2 * tol);
    return out;
}

QuadratureResult de_path(const SurfaceParams& p, const PathSpec& s, double tol) {
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    detail::Roots<double> r(p.x, p.y, p.alpha);
    QuadratureResult out;
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    double rel = std::max(1e-14, std::min(1e-9, tol));
    if (s.kind == PathKind::real_segment) {
        auto f = [&](double t, double tc) {
            detail::Anchored<double> pt{tc < 0 ? s.a : s.b, -tc};
            (void)t;
            return real_density(r, s.density, pt);
        };
        out.value = integrator.integrate(f, s.a, s.b, rel, &err, &l1, &levels);
    } else {
        std::vector<double> cuts{s.a};
        if (s.a < p.alpha && p.alpha < s.b) cuts.push_back(p.alpha);
        cuts.push_back(s.b);
        for (size_t k = 0; k + 1 < cuts.size(); ++k) {
            double e = 0.0;
            out.value += integrator.integrate([&](double t) { return arc_density(r, s.density, t); }, cuts[k],
                                              cuts[k + 1], rel, &e, &l1, &levels);
            err += e;
        }
    }
    out.error = err;
    return out;
}

}  // namespace

std::string to_string(Density d) {
    switch (d) {
        case Density::abs_dh_over_w: return "abs_dh_over_w";
        case Density::abs_w_dh: return "abs_w_dh";
        case Density::dh_plain: return "dh_plain";
        case Density::dh_cos_weight: return "dh_cos_weight";
    }
    return "unknown";
}

PathSpec make_path(const SurfaceParams& p, PathKind kind, double a, double b, Density density) {
    PathSpec s{kind, a, b, density, 0.0, 0.0};
    if (kind == PathKind::real_segment) {
        if (is_branch_endpoint(p, a)) s.exponent_a = -0.5;
        if (is_branch_endpoint(p, b)) s.exponent_b = -0.5;
    }
    return s;
}

QuadratureResult integrate_path(const SurfaceParams& p, const PathSpec& spec, double tol,
                                const QuadratureOptions& opt) {
    if (!(tol > 0)) throw DomainError("quadrature tolerance must be positive");
    if (spec.a > spec.b) throw DomainError("path endpoints must satisfy a <= b");
    if (spec.kind == PathKind::real_segment) {
        if (spec.a < -1.0 || spec.b > 1.0) throw DomainError("real segment must lie in [-1, 1]");
        for (double bp : {0.0, p.x})
            if (spec.a < bp && bp < spec.b)
                throw DomainError("branch point " + std::to_string(bp) + " lies inside the segment; split the path");
        if (spec.density == Density::dh_plain || spec.density == Density::dh_cos_weight)
            throw DomainError("density " + to_string(spec.density) + " needs the unit-circle arc");
    } else if (spec.a < 0.0 || spec.b > std::numbers::pi) {
        throw DomainError("arc angles must lie in [0, pi]");
    }
    if (spec.a == spec.b) return {};

    if (opt.method == QuadratureMethod::double_exponential) return de_path(p, spec, tol);

    auto res = gk_path<double>(p, spec, tol, opt.max_intervals);
    if (res.error > tol && opt.allow_extended) {
        res = gk_path<long double>(p, spec, tol, opt.max_intervals);
        res.extended = true;
    }
    if (res.error > tol)
        throw AccuracyError("quadrature of " + to_string(spec.density) + " did not reach tol " +
                                std::to_string(tol) + "; achieved " + std::to_string(res.error),
                            res.error);
    return res;
}

PathSpec integral_path(const SurfaceParams& p, int k) {
    const double x = p.x, pi = std::numbers::pi;
    using enum Density;
    switch (k) {
        case 1: return make_path(p, PathKind::real_segment, 0.0, x, abs_dh_over_w);
        case 2: return make_path(p, PathKind::unit_circle_arc, 0.0, pi, abs_dh_over_w);
        case 3: return make_path(p, PathKind::real_segment, 0.0, x, abs_w_dh);
        case 4: return make_path(p, PathKind::unit_circle_arc, 0.0, pi, abs_w_dh);
        case 5: return make_path(p, PathKind::real_segment, -1.0, 0.0, abs_dh_over_w);
        case 6: return make_path(p, PathKind::real_segment, x, 1.0, abs_dh_over_w);
        case 7: return make_path(p, PathKind::real_segment, x, 1.0, abs_w_dh);
        case 8: return make_path(p, PathKind::real_segment, -1.0, 0.0, abs_w_dh);
        case 9: return make_path(p, PathKind::unit_circle_arc, 0.0, pi, dh_cos_weight);
        case 10: return make_path(p, PathKind::unit_circle_arc, 0.0, pi, dh_plain);
        default: throw DomainError("integral index must be in 1..10");
    }
}

IntegralSet integral_set(const SurfaceParams& p, double tol, const QuadratureOptions& opt) {
    std::array<QuadratureResult, 10> res;
    parallel_for(10, [&](std::size_t i) { res[i] = integrate_path(p, integral_path(p, int(i) + 1), tol, opt); });
    IntegralSet s;
    for (int i = 0; i < 8; ++i) {
        s.I[i] = res[i].value;
        s.err[i] = res[i].error;
    }
    s.A_num = res[8].value;
    s.A_den = res[9].value;
    s.err[8] = res[8].error;
    s.err[9] = res[9].error;
    return s;
}

namespace {

using Vec3 = std::array<cplx, 3>;

struct Vec3Value {
    Vec3 v{};
    Vec3Value operator+(const Vec3Value& o) const { return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}}; }
    Vec3Value operator-(const Vec3Value& o) const { return {{v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}}; }
    Vec3Value operator*(double s) const { return {{v[0] * s, v[1] * s, v[2] * s}}; }
};

double norm3(const Vec3Value& a) { return std::abs(a.v[0]) + std::abs(a.v[1]) + std::abs(a.v[2]); }

// u on a path near ref: sigma * e^{i phi/2} sqrt(u^2 e^{-i phi}).
struct RotatedRoot {
    cplx rot;   // e^{-i phi}
    cplx half;  // sigma e^{i phi/2}

    RotatedRoot(const WeierstrassData& wd, const BranchRef& ref) {
        cplx u2 = wd.u2(WeierstrassData::at(ref.z));
        double phi = std::arg(u2);
        rot = std::polar(1.0, -phi);
        half = std::polar(1.0, 0.5 * phi);
        cplx guess = half * std::sqrt(u2 * rot);
        if (std::abs(guess - ref.u) > std::abs(guess + ref.u)) half = -half;
    }
    cplx operator()(cplx u2) const {
        cplx r = u2 * rot;
        if (r.real() < 0.0 && std::abs(r.imag()) < -0.2 * r.real())
            throw ContinuationError("forms path crosses the branch cut of the local root; shorten the path");
        return half * std::sqrt(r);
    }
};

Vec3Value forms_at(const WeierstrassData& wd, const RotatedRoot& root, const WeierstrassData::Point& pt, cplx dz) {
    cplx u = root(wd.u2(pt));
    auto ph = wd.phi(pt, u);
    return {{ph[0] * dz, ph[1] * dz, ph[2] * dz}};
}

}  // namespace

FormIntegral integrate_forms_segment(const WeierstrassData& wd, cplx za, cplx zb, bool sing_a, bool sing_b,
                                     const BranchRef& ref, double tol) {
    FormIntegral out;
    if (za == zb) return out;
    RotatedRoot root(wd, ref);
    const cplx d = zb - za;
    auto norm = [](const Vec3Value& a) { return norm3(a); };
    auto add = [&](const GKResult<Vec3Value, double>& r) {
        for (int k = 0; k < 3; ++k) out.value[k] += r.value.v[k];
        out.error += r.error;
        if (!r.converged && r.error > 1e3 * tol)
            throw AccuracyError("forms integral did not converge", r.error);
    };
    // piece with the substitution t = v^2 * len measured from endpoint e toward the other end
    auto substituted = [&](cplx e, cplx dir, double len) {
        auto f = [&](double v) -> Vec3Value {
            if (v == 0.0) return {};
            WeierstrassData::Point pt{e, dir * (len * v * v)};
            return forms_at(wd, root, pt, dir) * (2.0 * len * v);
        };
        add(gauss_kronrod<double, Vec3Value>(f, 0.0, 1.0, tol, 1e-13, 2000, norm));
    };
    if (sing_a && sing_b) {
        // the second half runs from zb back to the midpoint
        substituted(za, d, 0.5);
        FormIntegral back = out;
        out = {};
        substituted(zb, -d, 0.5);
        for (int k = 0; k < 3; ++k) out.value[k] = back.value[k] - out.value[k];
        out.error += back.error;
        return out;
    }
    if (sing_a) {
        substituted(za, d, 1.0);
        return out;
    }
    if (sing_b) {
        substituted(zb, -d, 1.0);
        for (auto& v : out.value) v = -v;
        return out;
    }
    auto f = [&](double t) -> Vec3Value {
        WeierstrassData::Point pt{za, d * t};
        return forms_at(wd, root, pt, d);
    };
    add(gauss_kronrod<double, Vec3Value>(f, 0.0, 1.0, tol, 1e-13, 2000, norm));
    return out;
}

FormIntegral integrate_forms_lower_arc(const WeierstrassData& wd, double t0, double t1, const BranchRef& ref,
                                       double tol) {
    FormIntegral out;
    if (t0 == t1) return out;
    RotatedRoot root(wd, ref);
    auto f = [&](double t) -> Vec3Value {
        cplx z = std::polar(1.0, -t);
        return forms_at(wd, root, WeierstrassData::at(z), cplx(0.0, -1.0) * z);
    };
    auto r = gauss_kronrod<double, Vec3Value>(f, t0, t1, tol, 1e-13, 2000, [](const Vec3Value& a) { return norm3(a); });
    if (!r.converged && r.error > 1e3 * tol) throw AccuracyError("arc forms integral did not converge", r.error);
    out.value = r.value.v;
    out.error = r.error;
    return out;
}

std::array<QuadratureResult, 2> alpha_integrals(cplx y, double tol, const QuadratureOptions& opt) {
    SurfaceParams p;
    p.y = y;
    std::array<QuadratureResult, 2> out;
    out[0] = integrate_path(p, integral_path(p, 9), tol, opt);
    out[1] = integrate_path(p, integral_path(p, 10), tol, opt);
    return out;
}

}  // namespace periodforge
