#include "splitquat/fueter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sq {

namespace {

constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;

/// Regularized split kernel (X-X0)^+ / (N(X-X0) + i eps ||X-X0||^2)^2.
QFunction regularized_kernel(const Biquaternion& x0, double eps) {
    return QFunction::custom([x0, eps](const Biquaternion& x) {
        const Biquaternion w = x - x0;
        const double nn = euclid_norm(w);
        const cplx den = quad_form_N(w) + cplx(0.0, eps) * (nn * nn);
        if (std::abs(den) < 1e-14)
            throw SingularElement("regularized kernel: denominator vanished");
        return (1.0 / (den * den)) * conjugate(w, ConjKind::plus);
    });
}

/// Composite Gauss-Legendre with panels geometrically graded toward
/// `cluster` (used for log-type integrands after integration by parts).
cplx quad_graded(const std::function<cplx(double)>& fn, double a, double b, double cluster) {
    if (b <= a) return 0.0;
    std::vector<double> edges;
    edges.push_back(a);
    if (cluster > a + 1e-14 && cluster < b - 1e-14) {
        // grade from a toward cluster, then away from cluster toward b
        const int levels = 42;
        for (int j = 1; j <= levels; ++j) {
            const double w = (cluster - a) * std::pow(0.5, j);
            if (w < 1e-15) break;
            edges.push_back(cluster - w);
        }
        edges.push_back(cluster);
        for (int j = levels; j >= 1; --j) {
            const double w = (b - cluster) * std::pow(0.5, j);
            if (w < 1e-15) continue;
            edges.push_back(cluster + w);
        }
    } else {
        const int panels = 8;
        for (int j = 1; j < panels; ++j) edges.push_back(a + (b - a) * j / panels);
    }
    edges.push_back(b);

    static std::vector<double> gx, gw;
    if (gx.empty()) gauss_legendre(16, gx, gw);
    cplx total = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t j = 0; j < gx.size(); ++j) total += half * gw[j] * fn(mid + half * gx[j]);
    }
    return total;
}

/// 4th-order central difference; g is evaluated slightly outside [a,b].
std::function<cplx(double)> fd_derivative(std::function<cplx(double)> fn, double h) {
    return [fn = std::move(fn), h](double x) {
        return (-fn(x + 2 * h) + 8.0 * fn(x + h) - 8.0 * fn(x - h) + fn(x - 2 * h)) / (12.0 * h);
    };
}

/// IBP evaluation on a window bounded away from sin(2 theta) = 0.
cplx theta_core(const std::function<cplx(double)>& g, int n, double eps, double a, double b) {
    auto ratio = [g](double th) { return g(th) / (2.0 * std::sin(2.0 * th)); };
    auto ratio_prime = fd_derivative(ratio, 1e-3);
    const cplx ie(0.0, eps);
    auto den = [ie](double th) { return std::cos(2.0 * th) + ie; };
    if (n == 1) {
        // integral = int log(cos 2t + ie) * r'(t) dt - [log(cos 2t + ie) * r(t)]
        const cplx boundary = std::log(den(b)) * ratio(b) - std::log(den(a)) * ratio(a);
        const cplx integral =
            quad_graded([&](double th) { return std::log(den(th)) * ratio_prime(th); }, a, b,
                        0.25 * std::numbers::pi);
        return integral - boundary;
    }
    auto inv_pow = [&](double th, int m) {
        cplx v = 1.0;
        const cplx d = den(th);
        for (int j = 0; j < m; ++j) v /= d;
        return v;
    };
    const double c = 1.0 / (n - 1);
    const cplx boundary = c * (inv_pow(b, n - 1) * ratio(b) - inv_pow(a, n - 1) * ratio(a));
    return boundary - c * theta_core(ratio_prime, n - 1, eps, a, b);
}

} // namespace

Biquaternion cf_classical(const FueterQuery& q) {
    const QFunction k = QFunction::kernel(q.x0);
    QuadResult quad;
    if (q.side == Side::left)
        quad = integrate_form(q.boundary, k, q.f, q.res);
    else
        quad = integrate_form(q.boundary, q.f, k, q.res);
    return (1.0 / kTwoPiSq) * quad.value;
}

Biquaternion cf_deformed(const FueterQuery& q) {
    if (q.eps == 0.0) throw std::invalid_argument("cf_deformed: eps must be nonzero");
    const Cycle3 dc = deform(q.boundary, q.eps, q.x0);
    const QFunction k = QFunction::kernel(q.x0);
    QuadResult quad;
    if (q.side == Side::left)
        quad = integrate_form(dc, k, q.f, q.res);
    else
        quad = integrate_form(dc, q.f, k, q.res);
    return (-1.0 / kTwoPiSq) * quad.value;
}

RegularizedResult cf_regularized(const FueterQuery& q) {
    if (q.eps == 0.0) throw std::invalid_argument("cf_regularized: eps must be nonzero");
    const QFunction rk = regularized_kernel(q.x0, q.eps);
    QuadResult quad;
    if (q.side == Side::left)
        quad = integrate_form(q.boundary, rk, q.f, q.res);
    else
        quad = integrate_form(q.boundary, q.f, rk, q.res);
    RegularizedResult out;
    out.value = (-1.0 / kTwoPiSq) * quad.value;
    out.transversality_margin = transversality_margin(q.boundary, q.x0);
    out.cone_tangency_warning = out.transversality_margin < 1e-3;
    return out;
}

ExtrapolationResult eps_extrapolate(const std::vector<std::pair<double, Biquaternion>>& samples,
                                    const EpsSchedule& schedule) {
    const std::size_t m = samples.size();
    if (m < 2) throw std::invalid_argument("eps_extrapolate: need at least two samples");
    const std::size_t degree =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(1, schedule.extrapolation_order)), m - 1);

    // Neville tableau in t = eps^2, componentwise, evaluated at t = 0.
    auto neville = [&](std::size_t count) {
        std::vector<double> t(count);
        std::vector<Biquaternion> v(count);
        for (std::size_t j = 0; j < count; ++j) {
            const double e = samples[m - count + j].first;
            t[j] = schedule.even_powers ? e * e : e;
            v[j] = samples[m - count + j].second;
        }
        for (std::size_t lvl = 1; lvl < count; ++lvl)
            for (std::size_t j = 0; j + lvl < count; ++j) {
                const double tj = t[j], tk = t[j + lvl];
                v[j] = (1.0 / (tj - tk)) * (tj * v[j + 1] - tk * v[j]);
            }
        return v[0];
    };

    const Biquaternion best = neville(degree + 1);
    const Biquaternion prev = neville(degree);
    ExtrapolationResult out;
    out.value = best;
    out.stability = euclid_norm(best - prev);
    const double scale = std::max(1.0, euclid_norm(best));
    if (out.stability > schedule.stability_tol * scale)
        throw NonConvergent("eps_extrapolate: extrapolants not settling (correction " +
                            std::to_string(out.stability) + ")");
    return out;
}

ExtrapolationResult cf_regularized_extrapolated(const FueterQuery& q, const EpsSchedule& schedule) {
    std::vector<std::pair<double, Biquaternion>> samples;
    samples.reserve(schedule.values.size());
    FueterQuery qq = q;
    for (double e : schedule.values) {
        qq.eps = e;
        samples.push_back({e, cf_regularized(qq).value});
    }
    return eps_extrapolate(samples, schedule);
}

cplx sphere_kernel_integral(double r, double eps, const std::array<int, 3>& res) {
    if (!(r > 0.0)) throw std::invalid_argument("sphere_kernel_integral: r must be positive");
    if (eps == 0.0) throw std::invalid_argument("sphere_kernel_integral: eps must be nonzero");
    Cycle3 sph = sphere_HR(RealFormPoint{RealFormTag::HR, {0, 0, 0, 0}}, r);
    // The integrand peaks on the cone theta = pi/4 with width ~ eps.
    sph = cluster_nodes(sph, 0, 0.25 * std::numbers::pi, std::max(std::abs(eps) * 0.5, 1e-8));
    const cplx ier2(0.0, eps * r * r);
    return integrate_scalar_dS(
        sph,
        [&](const Biquaternion& x) {
            const cplx den = quad_form_N(x) + ier2;
            return r / (den * den);
        },
        res);
}

cplx theta_regularized(const std::function<cplx(double)>& g, int n, double eps,
                       double window_lo, double window_hi) {
    if (n < 1) throw std::invalid_argument("theta_regularized: n must be >= 1");
    const double pi = std::numbers::pi;
    if (window_lo < -1e-12 || window_hi > 0.5 * pi + 1e-12 || window_lo >= window_hi)
        throw WindowTooWide("theta_regularized: window must lie inside [0, pi/2]");

    // Away from theta = pi/4 the denominator is bounded below, so the outer
    // parts integrate directly; the IBP rewrite is only needed on the middle
    // band where sin(2 theta) stays away from zero.
    const double band_lo = pi / 8.0, band_hi = 3.0 * pi / 8.0;
    const cplx ie(0.0, eps);
    auto direct = [&](double a, double b) {
        return quad_graded(
            [&](double th) {
                cplx v = g(th);
                const cplx d = std::cos(2.0 * th) + ie;
                for (int j = 0; j < n; ++j) v /= d;
                return v;
            },
            a, b, 0.25 * pi);
    };

    cplx total = 0.0;
    const double a = window_lo, b = window_hi;
    if (b <= band_lo || a >= band_hi) return direct(a, b);
    if (a < band_lo) total += direct(a, band_lo);
    if (b > band_hi) total += direct(band_hi, b);
    total += theta_core(g, n, eps, std::max(a, band_lo), std::min(b, band_hi));
    return total;
}

double transversality_margin(const Cycle3& boundary, const Biquaternion& x0, int grid_per_dim) {
    double margin = std::numeric_limits<double>::infinity();
    bool near_cone = false;
    for (const auto& patch : boundary.patches) {
        for (int i1 = 0; i1 < grid_per_dim; ++i1)
            for (int i2 = 0; i2 < grid_per_dim; ++i2)
                for (int i3 = 0; i3 < grid_per_dim; ++i3) {
                    const double u1 = patch.lo[0] + (patch.hi[0] - patch.lo[0]) * (i1 + 0.5) / grid_per_dim;
                    const double u2 = patch.lo[1] + (patch.hi[1] - patch.lo[1]) * (i2 + 0.5) / grid_per_dim;
                    const double u3 = patch.lo[2] + (patch.hi[2] - patch.lo[2]) * (i3 + 0.5) / grid_per_dim;
                    const Biquaternion x = patch.chart(u1, u2, u3);
                    const Biquaternion w = x - x0;
                    const double nw = euclid_norm(w);
                    if (std::abs(quad_form_N(w)) > 0.1 * std::max(1.0, nw * nw)) continue;
                    near_cone = true;
                    // gradient of N along the tangent frame, normalized per direction
                    const auto t = patch.tangents_at(u1, u2, u3);
                    const Biquaternion grad = 2.0 * conjugate(w, ConjKind::plus); // dN = 2<W^+, dZ>
                    double best = 0.0;
                    for (const auto& tk : t) {
                        const double len = euclid_norm(tk);
                        if (len < 1e-14) continue;
                        best = std::max(best, std::abs(pairing(conjugate(grad, ConjKind::plus), tk)) / len);
                    }
                    margin = std::min(margin, best);
                }
    }
    return near_cone ? margin : std::numeric_limits<double>::infinity();
}

double homotopy_check(const Cycle3& boundary, const Biquaternion& x0, bool x0_inside,
                      double eps, double r, const QFunction& f,
                      const std::array<int, 3>& res) {
    const Cycle3 dc = deform(boundary, eps, x0);
    const QFunction k = QFunction::kernel(x0);
    const Biquaternion deformed = integrate_form(dc, k, f, res).value;
    if (!x0_inside) return euclid_norm(deformed);
    Cycle3 ref = sphere_H(x0, r);
    for (auto& p : ref.patches) p.orientation = -p.orientation;
    const Biquaternion reference = integrate_form(ref, k, f, res).value;
    return euclid_norm(deformed - reference);
}

} // namespace sq
