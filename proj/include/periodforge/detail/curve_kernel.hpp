#pragma once

// Factored evaluation of the curve quantities. Every quantity is written as a
// product of root factors (z - r) so that cancellations near branch points
// and near e^{+-i alpha} never go through 0 * inf. Templated on the real type
// so the quadrature module can re-evaluate in extended precision.

#include <cmath>
#include <complex>

namespace periodforge::detail {

// z = anchor + offset. A factor (z - r) with r == anchor evaluates to the
// offset exactly, which keeps relative accuracy at branch-point endpoints.
template <class T>
struct Anchored {
    std::complex<T> anchor;
    std::complex<T> offset;

    std::complex<T> z() const { return anchor + offset; }
    std::complex<T> minus(const std::complex<T>& r) const {
        return anchor == r ? offset : (anchor - r) + offset;
    }
};

template <class T>
struct Roots {
    using C = std::complex<T>;
    T x{}, inv_x{};
    C y, inv_y, ybar, inv_ybar;
    C ea, eam;  // e^{i alpha}, e^{-i alpha}
    T cos_alpha{};

    Roots() = default;
    Roots(double x_, std::complex<double> y_, double alpha_) {
        x = T(x_);
        inv_x = T(1) / x;
        y = C(T(y_.real()), T(y_.imag()));
        inv_y = T(1) / y;
        ybar = std::conj(y);
        inv_ybar = std::conj(inv_y);
        T a = T(alpha_);
        ea = C(std::cos(a), std::sin(a));
        eam = std::conj(ea);
        cos_alpha = std::cos(a);
    }

    // Q = (z-y)(z-1/y)(z-ybar)(z-1/ybar): the numerator of w^2 times z, and the
    // denominator of dh.
    C q(const Anchored<T>& p) const {
        return p.minus(y) * p.minus(inv_y) * p.minus(ybar) * p.minus(inv_ybar);
    }
    T abs_q(const Anchored<T>& p) const {
        return std::abs(p.minus(y)) * std::abs(p.minus(inv_y)) * std::abs(p.minus(ybar)) *
               std::abs(p.minus(inv_ybar));
    }
    // D = z (z-x)(z-1/x)
    C d(const Anchored<T>& p) const {
        return p.minus(C(0)) * p.minus(C(x)) * p.minus(C(inv_x));
    }
    // E = (z - e^{i alpha})(z - e^{-i alpha}) = z (Z - 2 cos alpha)
    C e(const Anchored<T>& p) const { return p.minus(ea) * p.minus(eam); }

    // u = w (Z - 2 cos alpha), u^2 = Q / D
    C u2(const Anchored<T>& p) const { return q(p) / d(p); }

    // w^2 = z Q / ((z-x)(z-1/x) E^2)
    C w2(const Anchored<T>& p) const {
        C e2 = e(p);
        return p.minus(C(0)) * q(p) / (p.minus(C(x)) * p.minus(C(inv_x)) * e2 * e2);
    }

    // dh = -i E / Q dz
    C dh(const Anchored<T>& p) const { return C(0, -1) * e(p) / q(p); }

    // w dh = -i u z / Q dz
    C w_dh(const Anchored<T>& p, const C& u) const {
        return C(0, -1) * u * p.minus(C(0)) / q(p);
    }
    // dh / w = -i E^2 / (u z Q) dz
    C dh_over_w(const Anchored<T>& p, const C& u) const {
        C e2 = e(p);
        return C(0, -1) * e2 * e2 / (u * p.minus(C(0)) * q(p));
    }

    // |w dh| / |dz| = sqrt(|z|) / sqrt(|Q| |z-x| |z-1/x|)
    T abs_w_dh(const Anchored<T>& p) const {
        T az = std::abs(p.minus(C(0)));
        T ax = std::abs(p.minus(C(x))) * std::abs(p.minus(C(inv_x)));
        return std::sqrt(az) / std::sqrt(abs_q(p) * ax);
    }
    // |dh / w| / |dz| = |E|^2 sqrt(|z-x||z-1/x|) / (sqrt(|z|) |Q|^{3/2})
    T abs_dh_over_w(const Anchored<T>& p) const {
        T az = std::abs(p.minus(C(0)));
        T ax = std::abs(p.minus(C(x))) * std::abs(p.minus(C(inv_x)));
        T ae = std::abs(p.minus(ea)) * std::abs(p.minus(eam));
        T aq = abs_q(p);
        return ae * ae * std::sqrt(ax) / (std::sqrt(az) * aq * std::sqrt(aq));
    }
};

}  // namespace periodforge::detail
