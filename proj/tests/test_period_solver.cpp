#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "periodforge/period_solver.hpp"

using namespace periodforge;
using std::numbers::pi;

namespace {

SurfaceParams solved(double x, double rho) {
    SolveConfig cfg;
    cfg.x = x;
    cfg.rho = rho;
    return solve_lambda(cfg);
}

}  // namespace

TEST_CASE("ybar from x, rho, lambda") {
    cplx v = ybar_of(0.1, 0.0, 2.0);
    CHECK(std::abs(v - cplx(0.02, -0.04)) < 1e-16);
    for (double lam = 1.05; lam < 30; lam *= 1.3) {
        cplx b = ybar_of(0.01, 0.0, lam);
        CHECK(b.imag() < 0);
        CHECK(std::abs(b) < 0.01);
        CHECK(std::abs(ybar_of(0.001, -0.3, lam) * 10.0 - ybar_of(0.01, -0.3, lam)) < 1e-17);
    }
    CHECK_THROWS_AS(ybar_of(0.0, 0.0, 2.0), DomainError);
    CHECK_THROWS_AS(ybar_of(0.1, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(params_at(0.5, -1.5, 1.01, 1e-10), DomainError);
}

TEST_CASE("alpha from the integral ratio") {
    CHECK(solve_alpha(cplx(0, 0.5)) == doctest::Approx(pi / 2).epsilon(1e-12));
    double a = solve_alpha(cplx(0.3, 0.4), 1e-12);
    CHECK(a == doctest::Approx(1.070143).epsilon(1e-6));
    CHECK(std::abs(std::cos(a) - 0.48) < 1e-10);
    int n = 0;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            cplx y = std::polar(0.04 + 0.9 * i / 19.0, 0.05 + (pi - 0.1) * j / 19.0);
            double al = solve_alpha(y);
            CHECK(al > 0);
            CHECK(al < pi);
            CHECK(std::abs(std::cos(al) - 2 * y.real() / (1 + std::norm(y))) < 1e-8);
            ++n;
        }
    }
    CHECK(n == 400);
}

TEST_CASE("c1 and c2 near x = 1 stay finite") {
    SurfaceParams p;
    p.x = 0.999;
    p.y = {0.0, 0.5};
    p.alpha = pi / 2;
    auto c = compute_c1_c2(p, 1e-12);
    const auto& s = c.integrals;
    CHECK(std::isfinite(c.c1));
    CHECK(std::isfinite(c.c2));
    CHECK(s(6) < 1e-1);
    CHECK(std::abs(2 * s(7) - pi / 2.5) < 2e-2);
    CHECK(c.c2 == doctest::Approx((s(5) - s(6)) / (s(7) - s(8))).epsilon(1e-15));
}

TEST_CASE("scaled C1 and C2 settle as x -> 0 at the limiting lambda") {
    const double rho = -0.2;
    const double lam = solved(1e-3, rho).lambda;
    auto a = h_of_lambda(1e-3, rho, lam, 1e-12);
    auto b = h_of_lambda(1e-4, rho, lam, 1e-12);
    CHECK(a.C1 > 0);
    CHECK(b.C1 > 0);
    CHECK(std::abs(a.C1 - b.C1) < 1e-2 * b.C1);
    CHECK(std::abs(a.C2 - b.C2) < 1e-2 * b.C2);
    CHECK(std::abs(b.C1 - b.C2) < 1e-3 * b.C1);
}

TEST_CASE("transversality: h changes sign for rho = -0.2 and -0.4") {
    for (double rho : {-0.2, -0.4}) {
        SolveConfig cfg;
        cfg.x = 1e-3;
        cfg.rho = rho;
        auto br = find_bracket(cfg);
        REQUIRE(br.has_value());
        CHECK((br->first.h() < 0) != (br->second.h() < 0));
        CHECK(br->first.lambda > 1.05 - 1e-15);
        CHECK(br->second.lambda < 20 + 1e-12);
    }
}

TEST_CASE("rho = 0 has no sign change of h in (1.05, 20)") {
    SolveConfig cfg;
    cfg.x = 1e-3;
    cfg.rho = 0.0;
    CHECK_FALSE(find_bracket(cfg).has_value());
    CHECK_THROWS_AS(solve_lambda(cfg), BracketError);
    // h keeps one sign over the scan
    int sign = 0;
    for (double lam : lambda_grid(1.05, 20, 16)) {
        auto s = h_of_lambda(1e-3, 0.0, lam, 1e-10);
        int sg = s.h() < 0 ? -1 : 1;
        if (sign == 0) sign = sg;
        CHECK(sg == sign);
    }
}

TEST_CASE("bracket errors") {
    SolveConfig cfg;
    cfg.x = 1e-3;
    cfg.rho = -0.2;
    cfg.lambda_lo = 1.05;
    cfg.lambda_hi = 1.2;
    CHECK_THROWS_AS(solve_lambda(cfg), BracketError);
    cfg.lambda_lo = 3.0;
    cfg.lambda_hi = 2.0;
    CHECK_THROWS_AS(solve_lambda(cfg), DomainError);
    cfg = SolveConfig{};
    cfg.x = 0.0;
    CHECK_THROWS_AS(solve_lambda(cfg), DomainError);
    auto lo = h_of_lambda(1e-3, -0.2, 1.1, 1e-10), hi = h_of_lambda(1e-3, -0.2, 1.2, 1e-10);
    cfg = SolveConfig{};
    cfg.x = 1e-3;
    cfg.rho = -0.2;
    CHECK_THROWS_AS(solve_lambda_in(cfg, lo, hi), BracketError);
}

TEST_CASE("solved tuples: root quality, closure and residue identity") {
    for (double rho : {-0.2, -0.4}) {
        for (double x : {1e-2, 1e-3}) {
            INFO("rho " << rho << " x " << x);
            SolveConfig cfg;
            cfg.x = x;
            cfg.rho = rho;
            auto p = solve_lambda(cfg);
            auto h = h_of_lambda(x, rho, p.lambda, cfg.tol_quad);
            CHECK(std::abs(h.h()) < cfg.tol_root);
            CHECK(h.C1 > 0);
            CHECK(h.C2 > 0);
            CHECK(p.c * p.c * x * p.lambda == doctest::Approx(h.C1).epsilon(1e-12));
            auto rep = verify_periods(p, VerifyOptions{1e-10});
            CHECK(rep.max_period_residual() < 1e-7 * rep.loop_scale);
            CHECK(rep.max_period_residual() < 1e-7);
            CHECK(rep.residue_reality < 1e-8);
            CHECK(rep.alpha_consistency < 1e-6);
            CHECK(std::abs(rep.c1 - rep.c2) < 1e-6 * rep.c1);

            auto q = p;
            q.c *= 1.1;
            auto bad = verify_periods(q, VerifyOptions{1e-10});
            CHECK(std::abs(bad.period_residuals[0]) > 1e3 * std::abs(rep.period_residuals[0]));
            CHECK(std::abs(bad.period_residuals[0]) > 1e-6 * bad.loop_scale);
        }
    }
}

TEST_CASE("lambda(x) is Cauchy between x = 1e-2 and 1e-3") {
    for (double rho : {-0.2, -0.4}) {
        double a = solved(1e-2, rho).lambda, b = solved(1e-3, rho).lambda;
        CHECK(a > 1);
        CHECK(std::abs(a - b) < 1e-2);
    }
}

TEST_CASE("vertical period does not depend on c") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uc(0.2, 50.0);
    auto p = solved(1e-2, -0.2);
    auto ref = verify_periods(p, VerifyOptions{1e-10});
    for (int k = 0; k < 5; ++k) {
        auto q = p;
        q.c = uc(rng);
        auto r = verify_periods(q, VerifyOptions{1e-10});
        CHECK(std::abs(r.period_residuals[2]) < 1e-10);
        CHECK(std::abs(r.period_residuals[2] - ref.period_residuals[2]) < 1e-14);
    }
    // an unsolved tuple with alpha from the integral ratio also closes vertically
    SurfaceParams g;
    g.x = 0.3;
    g.y = {0.2, 0.3};
    g.alpha = solve_alpha(g.y);
    g.c = 0.7;
    auto r = verify_periods(g, VerifyOptions{1e-10});
    CHECK(std::abs(r.period_residuals[2]) < 1e-10);
    CHECK(r.max_period_residual() > 1e-4);
}

TEST_CASE("period residuals do not depend on the verification polyline") {
    auto p = solved(1e-2, -0.4);
    p.c *= 1.05;
    auto a = verify_periods(p, VerifyOptions{1e-10, 1, 1e-3});
    auto b = verify_periods(p, VerifyOptions{1e-10, 4, 1e-3});
    auto c = verify_periods(p, VerifyOptions{1e-10, 2, 1e-2});
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(a.period_residuals[k] - b.period_residuals[k]) < 1e-12 * a.loop_scale);
        CHECK(std::abs(a.period_residuals[k] - c.period_residuals[k]) < 1e-12 * a.loop_scale);
    }
}

TEST_CASE("sweep along x") {
    const double rho = -0.2;
    SolveConfig cfg;
    CHECK(sweep_x(rho, {}, cfg).points.empty());

    std::vector<double> grid;
    for (double x = 1e-3; x < 0.05; x *= 2) grid.push_back(x);
    auto sw = sweep_x(rho, grid, cfg);
    REQUIRE(sw.points.size() == grid.size());
    CHECK_FALSE(sw.truncated);
    for (size_t k = 0; k + 1 < sw.points.size(); ++k) {
        double a = sw.points[k].params.lambda, b = sw.points[k + 1].params.lambda;
        CHECK(std::abs(a - b) <= 0.1 * a);
    }
    double target = 0.5 / std::cos(rho);
    double prev = 1e300;
    for (size_t k = sw.points.size(); k-- > 0;) {
        const auto& p = sw.points[k].params;
        cplx res = residue_dh(p);
        CHECK(std::abs(res.imag()) < 1e-10 * std::abs(res));
        double err = std::abs(p.lambda / p.x * res.real() - target);
        CHECK(err < prev);
        prev = err;
        CHECK(sw.points[k].report.max_period_residual() < 1e-7);
    }
    CHECK(prev < 5e-2 * target);

    std::vector<double> unsorted{0.01, 0.001};
    CHECK_THROWS_AS(sweep_x(rho, unsorted, cfg), DomainError);
}

TEST_CASE("sweep truncates after a later failure and aborts on the first") {
    SolveConfig cfg;
    cfg.lambda_lo = 3.365;
    auto sw = sweep_x(-0.2, {1e-3, 0.1, 0.2}, cfg);
    CHECK(sw.truncated);
    CHECK(sw.points.size() == 1);
    CHECK(sw.failed_x == 0.1);
    CHECK_FALSE(sw.failure.empty());
    CHECK_THROWS_AS(sweep_x(0.0, {1e-3, 1e-2}, SolveConfig{}), BracketError);
}
