#include "periodforge/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "periodforge/gauss_kronrod.hpp"
#include "periodforge/parallel.hpp"

namespace periodforge {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Fills abs_error and rate from measured and target.
void finish(LimitReport& r) {
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        auto& row = r.rows[k];
        row.abs_error = std::abs(row.measured - row.target);
        row.rate = kNaN;
        if (k == 0) continue;
        const auto& prev = r.rows[k - 1];
        double d0 = std::abs(prev.x - r.limit_point), d1 = std::abs(row.x - r.limit_point);
        if (prev.abs_error > 0 && row.abs_error > 0 && d0 != d1)
            row.rate = std::log(row.abs_error / prev.abs_error) / std::log(d1 / d0);
    }
}

LimitReport make(std::string name, double limit_point, LimitRule rule, bool relative, double threshold) {
    LimitReport r;
    r.name = std::move(name);
    r.limit_point = limit_point;
    r.rule = rule;
    r.relative = relative;
    r.threshold = threshold;
    return r;
}

SurfaceParams along_ybar(double x, double rho, double lambda) {
    cplx yb = ybar_of(x, rho, lambda);
    if (!in_lower_half_disk(yb)) throw DomainError("ybar(x) lies outside the lower half disk at x = " + std::to_string(x));
    SurfaceParams p;
    p.x = x;
    p.rho = rho;
    p.lambda = lambda;
    p.y = std::conj(yb);
    p.alpha = solve_alpha(p.y, 1e-13);
    return p;
}

}  // namespace

double LimitReport::error_at(std::size_t k) const {
    const auto& row = rows.at(k);
    return relative ? row.abs_error / std::abs(row.target) : row.abs_error;
}

double LimitReport::final_error() const { return rows.empty() ? kNaN : error_at(rows.size() - 1); }

bool LimitReport::decreasing() const {
    for (std::size_t k = 1; k < rows.size(); ++k)
        if (!(rows[k].abs_error < rows[k - 1].abs_error)) return false;
    return true;
}

bool LimitReport::passed() const {
    if (rows.empty()) return false;
    if (rule == LimitRule::agreement) {
        for (std::size_t k = 0; k < rows.size(); ++k)
            if (!(error_at(k) < threshold)) return false;
        return true;
    }
    return decreasing() && final_error() < threshold;
}

double f_of_lambda(double lambda, double rho) {
    double rad = lambda * (1.0 + lambda * lambda + 2.0 * lambda * std::sin(rho));
    if (rad < 0) throw DomainError("f(lambda) radicand is negative");
    return std::sqrt(rad);
}

std::vector<LimitReport> check_I2_I4_limits(double rho, double lambda, const std::vector<double>& x_seq,
                                            double beta_t) {
    using namespace limit_thresholds;
    auto i2 = make("sqrt(lambda^3/x) I2", 0.0, LimitRule::converge, false, i2_scaled);
    auto i4 = make("sqrt(lambda/x^3) I4", 0.0, LimitRule::converge, true, i4_scaled_rel);
    auto beta = make("sqrt(x)|w| at e^{it}", 0.0, LimitRule::converge, true, beta_point_rel);
    auto agree = make("I2 and I4 two-method agreement", 0.0, LimitRule::agreement, true, two_method_rel);
    const double target4 = lambda * std::numbers::pi / f_of_lambda(lambda, rho);

    struct Point {
        double x, s2, s4, bw, bt, agree;
    };
    std::vector<Point> pts(x_seq.size());
    parallel_for(x_seq.size(), [&](std::size_t k) {
        const double x = x_seq[k];
        SurfaceParams p = along_ybar(x, rho, lambda);
        QuadratureOptions de;
        de.method = QuadratureMethod::double_exponential;
        auto g2 = integrate_path(p, integral_path(p, 2), 1e-12);
        auto g4 = integrate_path(p, integral_path(p, 4), 1e-12);
        auto d2 = integrate_path(p, integral_path(p, 2), 1e-12, de);
        auto d4 = integrate_path(p, integral_path(p, 4), 1e-12, de);
        cplx z = std::polar(1.0, beta_t);
        double bw = std::sqrt(x) * std::sqrt(std::abs(eval_w2(p, z)));
        double bt = std::abs(cplx(std::cos(rho), lambda + std::sin(rho))) /
                    (2.0 * std::abs(std::cos(beta_t) - std::cos(p.alpha)));
        double ag = std::max(std::abs(g2.value - d2.value) / g2.value, std::abs(g4.value - d4.value) / g4.value);
        pts[k] = {x, std::sqrt(lambda * lambda * lambda / x) * g2.value, std::sqrt(lambda / (x * x * x)) * g4.value,
                  bw, bt, ag};
    });
    for (const auto& pt : pts) {
        i2.rows.push_back({pt.x, pt.s2, 0.0});
        i4.rows.push_back({pt.x, pt.s4, target4});
        beta.rows.push_back({pt.x, pt.bw, pt.bt});
        // measured is the relative discrepancy, target 0; relative flag is
        // unusable with a zero target
        agree.rows.push_back({pt.x, pt.agree, 0.0});
    }
    agree.relative = false;
    for (auto* r : {&i2, &i4, &beta, &agree}) finish(*r);
    return {i2, i4, beta, agree};
}

double i7_by_substitution(const SurfaceParams& p, double tol) {
    const double x = p.x;
    const double scale = 1.0 - x * x;
    detail::Roots<double> r(p.x, p.y, p.alpha);
    auto f = [&](double u) {
        if (u == 0.0) return 0.0;
        detail::Anchored<double> pt{cplx(x), cplx(scale * u * u)};
        return r.abs_w_dh(pt) * 2.0 * scale * u;
    };
    auto res = gauss_kronrod(f, 0.0, 1.0 / std::sqrt(1.0 + x), tol, 1e-14, 4000);
    if (!res.converged && res.error > 1e3 * tol) throw AccuracyError("substituted I7 did not converge", res.error);
    return res.value;
}

std::vector<LimitReport> check_x1_limits(cplx y, const std::vector<double>& x_seq) {
    using namespace limit_thresholds;
    auto r6 = make("2 I6", 1.0, LimitRule::converge, false, two_i6);
    auto r7 = make("2 I7", 1.0, LimitRule::converge, false, two_i7);
    auto agree = make("I7 substitution agreement", 1.0, LimitRule::agreement, false, two_method_rel);
    const cplx Y = y + 1.0 / y;
    const double target7 = std::numbers::pi / std::abs(2.0 - Y);

    struct Point {
        double x, i6, i7, sub;
    };
    std::vector<Point> pts(x_seq.size());
    parallel_for(x_seq.size(), [&](std::size_t k) {
        SurfaceParams p;
        p.x = x_seq[k];
        p.y = y;
        p.alpha = std::acos(2.0 * y.real() / (1.0 + std::norm(y)));
        p.validate();
        double i6 = integrate_path(p, integral_path(p, 6), 1e-13).value;
        double i7 = integrate_path(p, integral_path(p, 7), 1e-13).value;
        pts[k] = {p.x, i6, i7, i7_by_substitution(p)};
    });
    for (const auto& pt : pts) {
        r6.rows.push_back({pt.x, 2 * pt.i6, 0.0});
        r7.rows.push_back({pt.x, 2 * pt.i7, target7});
        agree.rows.push_back({pt.x, std::abs(pt.sub - pt.i7) / pt.i7, 0.0});
    }
    for (auto* r : {&r6, &r7, &agree}) finish(*r);
    return {r6, r7, agree};
}

WeierstrassSample finite_weierstrass_data(const SurfaceParams& p, double C, cplx zeta) {
    const double x = p.x, lambda = p.lambda;
    const cplx il(0.0, lambda);
    const cplx d = zeta + il;
    const cplx z = x * zeta / d;
    const cplx dz = x * il / (d * d);
    WeierstrassSample s;
    s.G2 = -(C * C / (x * lambda)) * eval_w2(p, z);
    s.dH = (lambda / x) * eval_dh(p, z) * dz;
    return s;
}

std::vector<cplx> default_zeta_test_set() {
    return {cplx(0.5, 0.0), cplx(2.0, 0.0), cplx(3.0, 0.0),  cplx(2.0, 1.0),  cplx(1.0, 2.0),
            cplx(0.5, 0.5), cplx(-0.5, 1.5), cplx(1.5, -0.5), cplx(0.3, -1.0), cplx(2.0, 2.0)};
}

std::vector<LimitReport> check_weierstrass_convergence(double rho, double lambda, double C,
                                                       const std::vector<double>& x_seq,
                                                       const std::vector<cplx>& test_set, double clearance) {
    using namespace limit_thresholds;
    auto rg = make("sup |G^2 - limit|", 0.0, LimitRule::converge, false, weierstrass_g2);
    auto rd = make("sup |dH - limit|", 0.0, LimitRule::converge, false, weierstrass_dh);
    if (test_set.empty()) throw DomainError("empty zeta test set");
    for (double x : x_seq) {
        const cplx excluded[3] = {cplx(0.0, -lambda / (1.0 - x * x)), std::polar(1.0, rho), -std::polar(1.0, -rho)};
        for (cplx zeta : test_set)
            for (cplx e : excluded)
                if (std::abs(zeta - e) < clearance)
                    throw DomainError("test point (" + std::to_string(zeta.real()) + ", " +
                                      std::to_string(zeta.imag()) + ") is within " + std::to_string(clearance) +
                                      " of an excluded point");
        SurfaceParams p = along_ybar(x, rho, lambda);
        double eg = 0.0, ed = 0.0;
        for (cplx zeta : test_set) {
            auto fin = finite_weierstrass_data(p, C, zeta);
            auto lim = eval_limit_data_x0(lambda, rho, C, zeta);
            eg = std::max(eg, std::abs(fin.G2 - lim.G2));
            ed = std::max(ed, std::abs(fin.dH - lim.dH));
        }
        rg.rows.push_back({x, eg, 0.0});
        rd.rows.push_back({x, ed, 0.0});
    }
    finish(rg);
    finish(rd);
    return {rg, rd};
}

LimitReport check_residue_limit(double rho, const std::vector<SurfaceParams>& curve) {
    auto r = make("(lambda/x) Res(dh, ybar)", 0.0, LimitRule::converge, true, limit_thresholds::residue_rel);
    const double target = 0.5 / std::cos(rho);
    std::vector<SurfaceParams> pts(curve);
    std::sort(pts.begin(), pts.end(), [](const SurfaceParams& a, const SurfaceParams& b) { return a.x > b.x; });
    for (const auto& p : pts) r.rows.push_back({p.x, (p.lambda / p.x) * residue_dh(p).real(), target});
    finish(r);
    return r;
}

}  // namespace periodforge
