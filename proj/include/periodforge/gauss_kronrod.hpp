#pragma once

// Globally adaptive 21-point Gauss-Kronrod quadrature with QUADPACK-style
// error estimates. The value type may be real, complex or any small vector
// type with +, scalar * and a norm.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

namespace periodforge {

namespace gk_detail {

extern const long double kronrod_nodes[11];
extern const long double kronrod_weights[11];
extern const long double gauss_weights[5];

}  // namespace gk_detail

template <class V, class Real>
struct GKResult {
    V value{};
    Real error{};
    int evaluations = 0;
    int intervals = 0;
    bool converged = false;
};

template <class V, class Real>
struct GKSegment {
    Real a, b;
    V value;
    Real error;
    Real resabs;
    bool operator<(const GKSegment& o) const { return error < o.error; }
};

// One K21/G10 panel on [a, b]. Returns the Kronrod value and the error estimate.
template <class Real, class V, class F, class Norm>
GKSegment<V, Real> gk21_panel(const F& f, Real a, Real b, const Norm& norm) {
    using std::abs;
    const Real center = (a + b) / 2;
    const Real half = (b - a) / 2;
    const Real eps = std::numeric_limits<Real>::epsilon();
    V fc = f(center);
    V resk = fc * Real(gk_detail::kronrod_weights[10]);
    V resg{};
    Real resabs = Real(gk_detail::kronrod_weights[10]) * norm(fc);
    V fv1[10], fv2[10];
    for (int j = 0; j < 10; ++j) {
        Real dx = half * Real(gk_detail::kronrod_nodes[j]);
        V f1 = f(center - dx);
        V f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        Real wk = Real(gk_detail::kronrod_weights[j]);
        resk = resk + (f1 + f2) * wk;
        resabs += wk * (norm(f1) + norm(f2));
        if (j % 2 == 1) resg = resg + (f1 + f2) * Real(gk_detail::gauss_weights[j / 2]);
    }
    V mean = resk * Real(0.5);
    Real resasc = Real(gk_detail::kronrod_weights[10]) * norm(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += Real(gk_detail::kronrod_weights[j]) * (norm(fv1[j] - mean) + norm(fv2[j] - mean));
    Real ahalf = abs(half);
    resasc *= ahalf;
    resabs *= ahalf;
    Real err = norm((resk - resg) * half);
    if (resasc != 0 && err != 0) err = resasc * std::min(Real(1), std::pow(Real(200) * err / resasc, Real(1.5)));
    if (resabs > std::numeric_limits<Real>::min() / (50 * eps)) err = std::max(eps * 50 * resabs, err);
    return {a, b, resk * half, err, resabs};
}

// Adaptive bisection of the panel with the largest error until the summed
// error is below abs_tol and, when rel_tol > 0, below rel_tol * |value|. The
// target never drops under the rounding floor 64 eps * integral of |f|.
template <class Real, class V, class F, class Norm>
GKResult<V, Real> gauss_kronrod(const F& f, Real a, Real b, Real abs_tol, Real rel_tol,
                                int max_intervals, const Norm& norm) {
    GKResult<V, Real> out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    const Real eps = std::numeric_limits<Real>::epsilon();
    std::priority_queue<GKSegment<V, Real>> heap;
    auto first = gk21_panel<Real, V>(f, a, b, norm);
    out.evaluations = 21;
    V total = first.value;
    Real total_err = first.error;
    Real total_abs = first.resabs;
    heap.push(first);
    while (true) {
        Real target = rel_tol > 0 ? std::min(abs_tol, rel_tol * norm(total)) : abs_tol;
        target = std::max(target, 64 * eps * total_abs);
        if (total_err <= target) {
            out.converged = true;
            break;
        }
        if (static_cast<int>(heap.size()) >= max_intervals) break;
        auto worst = heap.top();
        Real mid = (worst.a + worst.b) / 2;
        using std::abs;
        if (abs(worst.b - worst.a) <= 100 * eps * std::max(abs(worst.a), abs(worst.b)) || mid == worst.a ||
            mid == worst.b)
            break;
        heap.pop();
        auto left = gk21_panel<Real, V>(f, worst.a, mid, norm);
        auto right = gk21_panel<Real, V>(f, mid, worst.b, norm);
        out.evaluations += 42;
        total = total + (left.value + right.value - worst.value);
        total_err += left.error + right.error - worst.error;
        total_abs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        // re-sum periodically to avoid drift in the running error
        if (heap.size() % 64 == 0) {
            auto copy = heap;
            V s{};
            Real e = 0, ab = 0;
            while (!copy.empty()) {
                s = s + copy.top().value;
                e += copy.top().error;
                ab += copy.top().resabs;
                copy.pop();
            }
            total = s;
            total_err = e;
            total_abs = ab;
        }
    }
    out.intervals = static_cast<int>(heap.size());
    // final sum in a fixed order for reproducibility
    std::vector<GKSegment<V, Real>> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
    V s{};
    Real e = 0;
    for (const auto& sg : segs) {
        s = s + sg.value;
        e += sg.error;
    }
    out.value = s;
    out.error = e;
    return out;
}

// Scalar convenience overload.
template <class Real, class F>
GKResult<Real, Real> gauss_kronrod(const F& f, Real a, Real b, Real abs_tol, Real rel_tol = 0,
                                   int max_intervals = 2000) {
    using std::abs;
    return gauss_kronrod<Real, Real>(f, a, b, abs_tol, rel_tol, max_intervals,
                                     [](const Real& v) { return abs(v); });
}

// Fixed n-point Gauss-Legendre rule (nodes by Newton iteration on P_n).
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace periodforge
