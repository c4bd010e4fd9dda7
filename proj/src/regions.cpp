#include "splitquat/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sq {

Biquaternion su11_sample(const SU11Params& p) {
    const double ch = std::cosh(p.t), sh = std::sinh(p.t);
    const cplx ea = std::polar(1.0, p.alpha), eb = std::polar(1.0, p.beta);
    Mat2 m;
    m.m11 = ch * ea;
    m.m12 = sh * eb;
    m.m21 = sh * std::conj(eb);
    m.m22 = ch * std::conj(ea);
    return from_matrix(m);
}

Gamma0Verdict gamma0_classify(const Biquaternion& z, double tol) {
    const Mat2 m = to_matrix(z);
    const Mat2 ms = m.adjoint();
    // H = M* diag(1,-1) M - diag(1,-1); Hermitian by construction.
    Mat2 h;
    h.m11 = ms.m11 * m.m11 - ms.m12 * m.m21 - 1.0;
    h.m12 = ms.m11 * m.m12 - ms.m12 * m.m22;
    h.m21 = ms.m21 * m.m11 - ms.m22 * m.m21;
    h.m22 = ms.m21 * m.m12 - ms.m22 * m.m22 + 1.0;
    const double a = h.m11.real(), d = h.m22.real();
    const double off = std::abs(h.m12);
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
    Gamma0Verdict v;
    v.eig_min = mid - rad;
    v.eig_max = mid + rad;
    v.in_gamma0 = v.eig_min > tol;
    v.in_gamma0_bar = v.eig_max < -tol;
    return v;
}

namespace {

double abs_n_at(const Biquaternion& x0, double t, double a, double b) {
    // N(X - x0) = N(X) + N(x0) - 2<X, x0> with N(X) = 1 on the group; the
    // expanded form avoids the cosh^2 - sinh^2 cancellation at large t.
    const Biquaternion x = su11_sample({t, a, b});
    return std::abs(cplx(1.0) + quad_form_N(x0) - 2.0 * pairing(x, x0));
}

} // namespace

double omega_margin(const Biquaternion& x0, double t_max, const std::array<int, 3>& grid) {
    if (!(t_max > 0.0)) throw std::invalid_argument("omega_margin: t_max must be positive");
    const double two_pi = 2.0 * std::numbers::pi;
    double best = std::numeric_limits<double>::infinity();
    double bt = 0.0, ba = 0.0, bb = 0.0;
    for (int i = 0; i < grid[0]; ++i) {
        const double t = t_max * i / std::max(1, grid[0] - 1);
        for (int j = 0; j < grid[1]; ++j) {
            const double a = two_pi * j / grid[1];
            for (int k = 0; k < grid[2]; ++k) {
                const double b = two_pi * k / grid[2];
                const double v = abs_n_at(x0, t, a, b);
                if (v < best) {
                    best = v;
                    bt = t; ba = a; bb = b;
                }
            }
        }
    }
    // coordinate descent with shrinking steps around the grid minimum
    double step_t = t_max / std::max(1, grid[0] - 1);
    double step_a = two_pi / grid[1];
    for (int iter = 0; iter < 60; ++iter) {
        bool improved = false;
        for (int dim = 0; dim < 3; ++dim) {
            const double s = (dim == 0) ? step_t : step_a;
            for (double sgn : {-1.0, 1.0}) {
                double t = bt, a = ba, b = bb;
                if (dim == 0) t = std::clamp(t + sgn * s, 0.0, t_max);
                if (dim == 1) a += sgn * s;
                if (dim == 2) b += sgn * s;
                const double v = abs_n_at(x0, t, a, b);
                if (v < best) {
                    best = v;
                    bt = t; ba = a; bb = b;
                    improved = true;
                }
            }
        }
        if (!improved) {
            step_t *= 0.5;
            step_a *= 0.5;
            if (step_t < 1e-12 && step_a < 1e-12) break;
        }
    }
    return best;
}

RegionVerdict region_classify(const Biquaternion& x0, double t_max, const std::array<int, 3>& grid) {
    RegionVerdict v;
    const Gamma0Verdict g = gamma0_classify(x0);
    v.in_gamma0 = g.in_gamma0;
    v.in_gamma0_bar = g.in_gamma0_bar;
    v.omega_margin = omega_margin(x0, t_max, grid);
    v.truncation_t_max = t_max;
    return v;
}

} // namespace sq
