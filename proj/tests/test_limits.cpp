#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "periodforge/limits.hpp"

using namespace periodforge;
using std::numbers::pi;

namespace {

const LimitReport& by_name(const std::vector<LimitReport>& rs, const std::string& name) {
    for (const auto& r : rs)
        if (r.name == name) return r;
    throw std::runtime_error("no report " + name);
}

}  // namespace

TEST_CASE("f(lambda)") {
    CHECK(f_of_lambda(2.0, 0.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
    CHECK(f_of_lambda(2.0, 0.0) == doctest::Approx(3.162278).epsilon(1e-6));
    CHECK(std::abs(f_of_lambda(1.0, -pi / 2)) < 1e-7);
    CHECK(2 * pi / f_of_lambda(2.0, 0.0) == doctest::Approx(1.986918).epsilon(1e-6));
}

TEST_CASE("report bookkeeping") {
    LimitReport r;
    r.threshold = 0.5;
    CHECK_FALSE(r.passed());
    r.rows = {{1.0, 2.0, 1.0, 1.0, 0.0}, {0.1, 1.1, 1.0, 0.1, 0.0}};
    CHECK(r.decreasing());
    CHECK(r.passed());
    r.rows.push_back({0.01, 1.2, 1.0, 0.2, 0.0});
    CHECK_FALSE(r.decreasing());
    CHECK_FALSE(r.passed());
    r.rule = LimitRule::agreement;
    CHECK_FALSE(r.passed());
    r.threshold = 1.5;
    CHECK(r.passed());
    r.relative = true;
    r.rows.back().target = 0.1;
    CHECK(r.error_at(2) == doctest::Approx(2.0));
    CHECK_FALSE(r.passed());
}

TEST_CASE("I2 and I4 as x -> 0 at lambda = 2, rho = 0") {
    auto rs = check_I2_I4_limits(0.0, 2.0, {1e-2, 1e-3, 1e-4});
    const auto& i4 = by_name(rs, "sqrt(lambda/x^3) I4");
    REQUIRE(i4.rows.size() == 3);
    CHECK(i4.rows[2].target == doctest::Approx(1.986918).epsilon(1e-6));
    CHECK(std::abs(i4.rows[2].measured - 1.986918) < 5e-2 * 1.986918);
    CHECK(i4.decreasing());
    const auto& i2 = by_name(rs, "sqrt(lambda^3/x) I2");
    CHECK(i2.rows[1].measured < i2.rows[0].measured);
    CHECK(i2.rows[2].measured < i2.rows[1].measured);
    CHECK(i2.rows[2].measured >= 0);
    // errors shrink like x^2
    CHECK(i4.rows[2].rate == doctest::Approx(2.0).epsilon(0.05));
    const auto& beta = by_name(rs, "sqrt(x)|w| at e^{it}");
    CHECK(beta.decreasing());
    const auto& ag = by_name(rs, "I2 and I4 two-method agreement");
    for (const auto& row : ag.rows) CHECK(row.measured < 1e-8);
    for (const auto& r : rs) {
        INFO(r.name);
        CHECK(r.passed());
    }
}

TEST_CASE("beta-point limit against a direct evaluation") {
    // sqrt(x)|w| on |z| = 1 through the Z-form, independent of the factored kernel
    const double x = 1e-5, rho = -0.3, lambda = 2.5, t = pi / 4;
    SurfaceParams p;
    p.x = x;
    p.y = std::conj(ybar_of(x, rho, lambda));
    p.alpha = std::acos(2 * p.y.real() / (1 + std::norm(p.y)));
    double measured = std::sqrt(x) * std::sqrt(std::abs(oracle::w2_direct(p, std::polar(1.0, t))));
    double target = std::abs(cplx(0, lambda) + std::polar(1.0, rho)) / (2 * std::abs(std::cos(t) - std::cos(p.alpha)));
    CHECK(measured == doctest::Approx(target).epsilon(1e-4));
}

TEST_CASE("x -> 1 limits at y = 0.5i") {
    auto rs = check_x1_limits(cplx(0, 0.5), {0.9, 0.99, 0.999});
    const auto& r7 = by_name(rs, "2 I7");
    CHECK(r7.rows[0].target == doctest::Approx(1.256637).epsilon(1e-6));
    CHECK(std::abs(r7.rows[2].measured - pi / 2.5) < 2e-2);
    CHECK(r7.decreasing());
    const auto& r6 = by_name(rs, "2 I6");
    CHECK(r6.rows[0].measured > r6.rows[1].measured);
    CHECK(r6.rows[1].measured > r6.rows[2].measured);
    CHECK(r6.rows[2].measured < 1e-2);
    for (const auto& r : rs) {
        INFO(r.name);
        CHECK(r.passed());
    }
}

TEST_CASE("substituted I7 matches the direct quadrature and the oracle") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 5; ++k) {
        auto p = oracle::random_params(rng);
        double direct = integrate_path(p, integral_path(p, 7), 1e-13).value;
        double sub = i7_by_substitution(p);
        CHECK(std::abs(direct - sub) <= 1e-8 * direct);
        double brute = oracle::midpoint_singular([&](double t) { return oracle::abs_w_dh(p, t); }, p.x, 1.0, true,
                                                 false, 200000);
        CHECK(sub == doctest::Approx(brute).epsilon(1e-3));
    }
}

TEST_CASE("finite Weierstrass data in the zeta chart") {
    const double lambda = 2.0, rho = -0.2, C = 1.7;
    SurfaceParams p;
    p.x = 1e-4;
    p.lambda = lambda;
    p.rho = rho;
    p.y = std::conj(ybar_of(p.x, rho, lambda));
    p.alpha = solve_alpha(p.y);
    auto fin = finite_weierstrass_data(p, C, 1.0);
    auto lim = eval_limit_data_x0(lambda, rho, C, 1.0);
    CHECK(std::abs(fin.G2 - lim.G2) < 1e-2 * std::abs(lim.G2));
    CHECK(std::abs(fin.dH - lim.dH) < 1e-2 * std::abs(lim.dH));
    cplx zeta(2, 1);
    auto f2 = finite_weierstrass_data(p, C, zeta);
    auto l2 = eval_limit_data_x0(lambda, rho, C, zeta);
    CHECK(std::abs(f2.dH - 1.0 / ((zeta - std::polar(1.0, rho)) * (zeta + std::polar(1.0, -rho)))) <
          1e-2 * std::abs(l2.dH));
    // G^2 through the Z-form of w^2
    cplx z = p.x * zeta / (zeta + cplx(0, lambda));
    cplx g2 = -(C * C / (p.x * lambda)) * oracle::w2_direct(p, z);
    CHECK(std::abs(g2 - f2.G2) < 1e-8 * std::abs(g2));
    CHECK(std::abs(g2 - l2.G2) < 1e-2 * std::abs(l2.G2));
}

TEST_CASE("Weierstrass convergence along x") {
    auto rs = check_weierstrass_convergence(-0.2, 2.0, 1.0, {1e-2, 1e-3, 1e-4}, default_zeta_test_set());
    REQUIRE(rs.size() == 2);
    for (const auto& r : rs) {
        INFO(r.name);
        CHECK(r.rows[1].measured > r.rows[2].measured);
        CHECK(r.decreasing());
        CHECK(r.passed());
    }
    auto with_one = default_zeta_test_set();
    with_one.push_back(1.0);
    CHECK_THROWS_AS(check_weierstrass_convergence(0.0, 2.0, 1.0, {1e-3}, with_one), DomainError);
    CHECK_THROWS_AS(check_weierstrass_convergence(0.0, 2.0, 1.0, {1e-3}, {cplx(0.0, -2.01)}), DomainError);
    CHECK_THROWS_AS(check_weierstrass_convergence(0.0, 2.0, 1.0, {1e-3}, {}), DomainError);
}

TEST_CASE("residue limit along a solved curve") {
    const double rho = -0.2;
    std::vector<double> grid{1e-3, 2e-3, 4e-3, 8e-3};
    auto sw = sweep_x(rho, grid, SolveConfig{});
    std::vector<SurfaceParams> curve;
    for (const auto& pt : sw.points) curve.push_back(pt.params);
    auto r = check_residue_limit(rho, curve);
    REQUIRE(r.rows.size() == 4);
    CHECK(r.rows.front().x == 8e-3);
    CHECK(r.rows[0].target == doctest::Approx(0.5 / std::cos(rho)));
    CHECK(r.decreasing());
    CHECK(r.passed());
    CHECK(r.final_error() < 5e-2);

    LimitReport t = check_residue_limit(-pi / 3, {});
    CHECK(t.rows.empty());
    SurfaceParams q = curve.front();
    q.rho = -pi / 3;
    auto r3 = check_residue_limit(-pi / 3, {q});
    CHECK(r3.rows[0].target == doctest::Approx(1.0).epsilon(1e-15));
}
