#include "periodforge/gauss_kronrod.hpp"

#include <numbers>
#include <vector>

namespace periodforge {

namespace gk_detail {

const long double kronrod_nodes[11] = {
    0.995657163025808080735527280689003L, 0.973906528517171720077964012084452L,
    0.930157491355708226001207180059508L, 0.865063366688984510732096688423493L,
    0.780817726586416897063717578345042L, 0.679409568299024406234327365114874L,
    0.562757134668604683339000099272694L, 0.433395394129247190799265943165784L,
    0.294392862701460198131126603103866L, 0.148874338981631210884826001129720L,
    0.000000000000000000000000000000000L};

const long double kronrod_weights[11] = {
    0.011694638867371874278064396062192L, 0.032558162307964727478818972459390L,
    0.054755896574351996031381300244580L, 0.075039674810919952767043140916190L,
    0.093125454583697605535065465083366L, 0.109387158802297641899210590325805L,
    0.123491976262065851077208745109033L, 0.134709217311473325928054001771707L,
    0.142775938577060080797094273138717L, 0.147739104901338491374841515972068L,
    0.149445554002916905664936468389821L};

const long double gauss_weights[5] = {
    0.066671344308688137593568809893332L, 0.149451349150580593145776339657697L,
    0.219086362515982043995534934228163L, 0.269266719309996355091226921569469L,
    0.295524224714752870173892994651338L};

}  // namespace gk_detail

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n) {
    double sum = 0.0;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 1; i <= (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pn = n == 1 ? x : p1;
            double pm = n == 1 ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        if (2 * i - 1 == n)
            sum += w * f(mid);
        else
            sum += w * (f(mid - half * x) + f(mid + half * x));
    }
    return sum * half;
}

}  // namespace periodforge
