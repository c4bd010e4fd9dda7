#include "splitquat/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>
#include <utility>

namespace sq {

namespace {

cplx det3(const std::array<std::array<cplx, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool finite(const Biquaternion& z) {
    auto ok = [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
    return ok(z.z0) && ok(z.z1) && ok(z.z2) && ok(z.z3);
}

/// Real coordinates of an HR element in the basis (e0, et1, et2, e3).
std::array<double, 4> hr_coords(const Biquaternion& z) {
    return {z.z0.real(), z.z1.imag(), -z.z2.imag(), z.z3.real()};
}

double gram_volume(const std::array<Biquaternion, 3>& frame) {
    std::array<std::array<double, 4>, 3> v;
    for (int k = 0; k < 3; ++k) v[static_cast<std::size_t>(k)] = hr_coords(frame[static_cast<std::size_t>(k)]);
    double g[3][3];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            double s = 0.0;
            for (int j = 0; j < 4; ++j) s += v[static_cast<std::size_t>(a)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)];
            g[a][b] = s;
        }
    const double det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
                       g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                       g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    return det > 0.0 ? std::sqrt(det) : 0.0;
}

struct Axis {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Axis make_axis(double lo, double hi, bool periodic, int n) {
    Axis a;
    a.nodes.resize(static_cast<std::size_t>(n));
    a.weights.resize(static_cast<std::size_t>(n));
    if (periodic) {
        const double len = hi - lo;
        for (int j = 0; j < n; ++j) {
            a.nodes[static_cast<std::size_t>(j)] = lo + len * j / n;
            a.weights[static_cast<std::size_t>(j)] = len / n;
        }
    } else {
        std::vector<double> x, w;
        gauss_legendre(n, x, w);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (int j = 0; j < n; ++j) {
            a.nodes[static_cast<std::size_t>(j)] = mid + half * x[static_cast<std::size_t>(j)];
            a.weights[static_cast<std::size_t>(j)] = half * w[static_cast<std::size_t>(j)];
        }
    }
    return a;
}

/// Deterministic parallel reduction: the iteration space is split into fixed
/// chunks combined in index order, so the result does not depend on the
/// number of worker threads.
std::atomic<int> g_thread_override{0};

Biquaternion parallel_sum(int n, const std::function<Biquaternion(int, int)>& chunk_sum) {
    const int nchunks = std::min(n, 32);
    std::vector<Biquaternion> partial(static_cast<std::size_t>(nchunks));
    const int override_n = g_thread_override.load();
    unsigned hw = std::thread::hardware_concurrency();
    const int want = override_n > 0 ? override_n : static_cast<int>(hw ? hw : 1);
    const int nthreads = std::max(1, std::min(want, nchunks));
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&](int tid) {
        try {
            for (int c = tid; c < nchunks; c += nthreads) {
                const int b = n * c / nchunks;
                const int e = n * (c + 1) / nchunks;
                partial[static_cast<std::size_t>(c)] = chunk_sum(b, e);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    if (nthreads == 1) {
        run(0);
    } else {
        workers.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) workers.emplace_back(run, t);
        for (auto& t : workers) t.join();
    }
    if (error) std::rethrow_exception(error);
    Biquaternion total;
    for (const auto& p : partial) total += p;
    return total;
}

Biquaternion integrate_once(const Cycle3& c, const QFunction& left, const QFunction& right,
                            const std::array<int, 3>& res) {
    Biquaternion total;
    for (const auto& patch : c.patches) {
        std::array<Axis, 3> ax;
        for (int d = 0; d < 3; ++d)
            ax[static_cast<std::size_t>(d)] = make_axis(patch.lo[static_cast<std::size_t>(d)], patch.hi[static_cast<std::size_t>(d)],
                                                        patch.periodic[static_cast<std::size_t>(d)], res[static_cast<std::size_t>(d)]);
        const int n1 = static_cast<int>(ax[0].nodes.size());
        Biquaternion patch_sum = parallel_sum(n1, [&](int b, int e) {
            Biquaternion acc;
            for (int i1 = b; i1 < e; ++i1) {
                const double u1 = ax[0].nodes[static_cast<std::size_t>(i1)];
                const double w1 = ax[0].weights[static_cast<std::size_t>(i1)];
                for (std::size_t i2 = 0; i2 < ax[1].nodes.size(); ++i2) {
                    const double u2 = ax[1].nodes[i2];
                    const double w12 = w1 * ax[1].weights[i2];
                    for (std::size_t i3 = 0; i3 < ax[2].nodes.size(); ++i3) {
                        const double u3 = ax[2].nodes[i3];
                        const double w = w12 * ax[2].weights[i3];
                        const Biquaternion z = patch.chart(u1, u2, u3);
                        const auto t = patch.tangents_at(u1, u2, u3);
                        Biquaternion lv, rv;
                        try {
                            lv = left(z);
                            rv = right(z);
                        } catch (const SingularElement&) {
                            throw IntegrandSingular("integrate_form: singular integrand at a node");
                        }
                        acc += w * mul(lv, mul(eval_Dz(t[0], t[1], t[2]), rv));
                    }
                }
            }
            return acc;
        });
        total += patch.orientation * patch_sum;
    }
    if (!finite(total)) throw IntegrandSingular("integrate_form: non-finite result");
    return total;
}

} // namespace

cplx eval_dV(const Biquaternion& z1, const Biquaternion& z2,
             const Biquaternion& z3, const Biquaternion& z4) {
    const std::array<std::array<cplx, 4>, 4> m = {z1.coeffs(), z2.coeffs(), z3.coeffs(),
                                                  z4.coeffs()};
    // Laplace expansion along the first row.
    cplx det = 0.0;
    double sign = 1.0;
    for (int col = 0; col < 4; ++col) {
        std::array<std::array<cplx, 3>, 3> minor;
        for (int r = 1; r < 4; ++r) {
            int cc = 0;
            for (int c = 0; c < 4; ++c) {
                if (c == col) continue;
                minor[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(cc++)] = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            }
        }
        det += sign * m[0][static_cast<std::size_t>(col)] * det3(minor);
        sign = -sign;
    }
    return det;
}

Biquaternion eval_Dz(const Biquaternion& t2, const Biquaternion& t3,
                     const Biquaternion& t4) {
    const std::array<std::array<cplx, 4>, 3> m = {t2.coeffs(), t3.coeffs(), t4.coeffs()};
    std::array<cplx, 4> comp;
    double sign = 1.0;
    for (int col = 0; col < 4; ++col) {
        std::array<std::array<cplx, 3>, 3> minor;
        for (int r = 0; r < 3; ++r) {
            int cc = 0;
            for (int c = 0; c < 4; ++c) {
                if (c == col) continue;
                minor[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc++)] = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            }
        }
        comp[static_cast<std::size_t>(col)] = sign * det3(minor);
        sign = -sign;
    }
    return {comp[0], comp[1], comp[2], comp[3]};
}

Biquaternion eval_Dz_matrix_form(const Biquaternion& t2, const Biquaternion& t3,
                                 const Biquaternion& t4) {
    const Mat2 a = to_matrix(t2), b = to_matrix(t3), c = to_matrix(t4);
    auto wedge = [](cplx a1, cplx a2, cplx a3, cplx b1, cplx b2, cplx b3,
                    cplx c1, cplx c2, cplx c3) {
        return det3({{{a1, a2, a3}, {b1, b2, b3}, {c1, c2, c3}}});
    };
    Mat2 out;
    out.m11 = -0.5 * wedge(a.m11, a.m12, a.m21, b.m11, b.m12, b.m21, c.m11, c.m12, c.m21);
    out.m12 = -0.5 * wedge(a.m11, a.m12, a.m22, b.m11, b.m12, b.m22, c.m11, c.m12, c.m22);
    out.m21 = 0.5 * wedge(a.m11, a.m21, a.m22, b.m11, b.m21, b.m22, c.m11, c.m21, c.m22);
    out.m22 = 0.5 * wedge(a.m12, a.m21, a.m22, b.m12, b.m21, b.m22, c.m12, c.m21, c.m22);
    return from_matrix(out);
}

std::array<Biquaternion, 3> CyclePatch::tangents_at(double u1, double u2, double u3) const {
    if (tangent) return tangent(u1, u2, u3);
    const double h = fd_step;
    return {(0.5 / h) * (chart(u1 + h, u2, u3) - chart(u1 - h, u2, u3)),
            (0.5 / h) * (chart(u1, u2 + h, u3) - chart(u1, u2 - h, u3)),
            (0.5 / h) * (chart(u1, u2, u3 + h) - chart(u1, u2, u3 - h))};
}

Cycle3 sphere_H(const Biquaternion& center, double r) {
    const Biquaternion e0 = Biquaternion::e0(), e1 = Biquaternion::e1(),
                       e2 = Biquaternion::e2(), e3 = Biquaternion::e3();
    CyclePatch p;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {std::numbers::pi, std::numbers::pi, 2.0 * std::numbers::pi};
    p.periodic = {false, false, true};
    p.orientation = 1.0;
    p.chart = [=](double th, double ph, double ps) {
        return center + r * (std::cos(th) * e0 + std::sin(th) * std::cos(ph) * e1 +
                             std::sin(th) * std::sin(ph) * std::cos(ps) * e2 +
                             std::sin(th) * std::sin(ph) * std::sin(ps) * e3);
    };
    p.tangent = [=](double th, double ph, double ps) -> std::array<Biquaternion, 3> {
        const double st = std::sin(th), ct = std::cos(th);
        const double sp = std::sin(ph), cp = std::cos(ph);
        const double ss = std::sin(ps), cs = std::cos(ps);
        return {r * (-st * e0 + ct * cp * e1 + ct * sp * cs * e2 + ct * sp * ss * e3),
                r * (-st * sp * e1 + st * cp * cs * e2 + st * cp * ss * e3),
                r * (-st * sp * ss * e2 + st * sp * cs * e3)};
    };
    return Cycle3{{p}};
}

Cycle3 sphere_HR(const RealFormPoint& center, double r) {
    const Biquaternion c = center.embed();
    const auto d = real_form_basis(RealFormTag::HR);
    CyclePatch p;
    p.lo = {0.0, 0.0, 0.0};
    p.hi = {0.5 * std::numbers::pi, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi};
    p.periodic = {false, true, true};
    p.orientation = 1.0;
    p.chart = [=](double th, double ph, double ps) {
        return c + r * (std::cos(th) * std::cos(ph) * d[0] + std::sin(th) * std::sin(ps) * d[1] +
                        std::sin(th) * std::cos(ps) * d[2] + std::cos(th) * std::sin(ph) * d[3]);
    };
    p.tangent = [=](double th, double ph, double ps) -> std::array<Biquaternion, 3> {
        const double st = std::sin(th), ct = std::cos(th);
        const double sp = std::sin(ph), cp = std::cos(ph);
        const double ss = std::sin(ps), cs = std::cos(ps);
        return {r * (-st * cp * d[0] + ct * ss * d[1] + ct * cs * d[2] - st * sp * d[3]),
                r * (-ct * sp * d[0] + ct * cp * d[3]),
                r * (st * cs * d[1] - st * ss * d[2])};
    };
    return Cycle3{{p}};
}

Cycle3 box_boundary_HR(const RealFormPoint& center, const std::array<double, 4>& half_widths) {
    for (double w : half_widths)
        if (!(w > 0.0)) throw std::invalid_argument("box_boundary_HR: half-widths must be positive");
    const Biquaternion c = center.embed();
    const auto d = real_form_basis(RealFormTag::HR);
    Cycle3 cyc;
    for (int k = 0; k < 4; ++k) {
        std::array<int, 3> rest{};
        int cc = 0;
        for (int j = 0; j < 4; ++j)
            if (j != k) rest[static_cast<std::size_t>(cc++)] = j;
        for (int side = -1; side <= 1; side += 2) {
            CyclePatch p;
            for (int j = 0; j < 3; ++j) {
                p.lo[static_cast<std::size_t>(j)] = -half_widths[static_cast<std::size_t>(rest[static_cast<std::size_t>(j)])];
                p.hi[static_cast<std::size_t>(j)] = half_widths[static_cast<std::size_t>(rest[static_cast<std::size_t>(j)])];
            }
            p.periodic = {false, false, false};
            const double fixed = side * half_widths[static_cast<std::size_t>(k)];
            const int i0 = rest[0], i1 = rest[1], i2 = rest[2];
            p.chart = [=](double u1, double u2, double u3) {
                std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};
                x[static_cast<std::size_t>(k)] = fixed;
                x[static_cast<std::size_t>(i0)] = u1;
                x[static_cast<std::size_t>(i1)] = u2;
                x[static_cast<std::size_t>(i2)] = u3;
                Biquaternion z = c;
                for (int j = 0; j < 4; ++j) z += x[static_cast<std::size_t>(j)] * d[static_cast<std::size_t>(j)];
                return z;
            };
            p.tangent = [=](double, double, double) -> std::array<Biquaternion, 3> {
                return {d[static_cast<std::size_t>(i0)], d[static_cast<std::size_t>(i1)], d[static_cast<std::size_t>(i2)]};
            };
            // Outward-normal convention: sign of dV(n, t1, t2, t3).
            p.orientation = side * ((k % 2 == 0) ? 1.0 : -1.0);
            cyc.patches.push_back(std::move(p));
        }
    }
    return cyc;
}

Cycle3 deform(const Cycle3& c, double eps, const Biquaternion& z0) {
    const cplx ie(0.0, eps);
    Cycle3 out;
    out.patches.reserve(c.patches.size());
    for (const auto& patch : c.patches) {
        CyclePatch p = patch;
        auto base_chart = patch.chart;
        p.chart = [=](double u1, double u2, double u3) {
            const Biquaternion z = base_chart(u1, u2, u3);
            return z + ie * conjugate(z - z0, ConjKind::minus);
        };
        if (patch.tangent) {
            auto base_tan = patch.tangent;
            p.tangent = [=](double u1, double u2, double u3) {
                auto t = base_tan(u1, u2, u3);
                for (auto& v : t) v = v + ie * conjugate(v, ConjKind::minus);
                return t;
            };
        } else {
            p.tangent = nullptr; // FD on the deformed chart
        }
        out.patches.push_back(std::move(p));
    }
    return out;
}

Cycle3 cluster_nodes(const Cycle3& c, int dim, double where, double delta) {
    if (dim < 0 || dim > 2) throw std::invalid_argument("cluster_nodes: bad dimension");
    if (!(delta > 0.0)) throw std::invalid_argument("cluster_nodes: scale must be positive");
    Cycle3 out;
    for (const auto& patch : c.patches) {
        CyclePatch p = patch;
        const std::size_t sd = static_cast<std::size_t>(dim);
        const double slo = std::asinh((patch.lo[sd] - where) / delta);
        const double shi = std::asinh((patch.hi[sd] - where) / delta);
        p.lo[sd] = slo;
        p.hi[sd] = shi;
        p.periodic[sd] = false;
        auto base_chart = patch.chart;
        auto map = [where, delta](double s) { return where + delta * std::sinh(s); };
        p.chart = [=](double u1, double u2, double u3) {
            double u[3] = {u1, u2, u3};
            u[dim] = map(u[dim]);
            return base_chart(u[0], u[1], u[2]);
        };
        if (patch.tangent) {
            auto base_tan = patch.tangent;
            p.tangent = [=](double u1, double u2, double u3) {
                double u[3] = {u1, u2, u3};
                const double s = u[dim];
                u[dim] = map(s);
                auto t = base_tan(u[0], u[1], u[2]);
                t[sd] = (delta * std::cosh(s)) * t[sd];
                return t;
            };
        } else {
            p.tangent = nullptr;
        }
        out.patches.push_back(std::move(p));
    }
    return out;
}

QuadResult integrate_form(const Cycle3& c, const QFunction& left, const QFunction& right,
                          const std::array<int, 3>& res) {
    for (int n : res)
        if (n < 2) throw std::invalid_argument("integrate_form: resolution must be >= 2");
    QuadResult q;
    q.resolution = res;
    q.value = integrate_once(c, left, right, res);
    const std::array<int, 3> half = {std::max(2, res[0] / 2), std::max(2, res[1] / 2),
                                     std::max(2, res[2] / 2)};
    const Biquaternion coarse = integrate_once(c, left, right, half);
    q.err_estimate = euclid_norm(q.value - coarse);
    return q;
}

QuadResult integrate_form_refined(const Cycle3& c, const QFunction& left,
                                  const QFunction& right, std::array<int, 3> res,
                                  double rel_tol, int cap) {
    QuadResult q = integrate_form(c, left, right, res);
    while (true) {
        const double scale = std::max(1.0, euclid_norm(q.value));
        if (q.err_estimate <= rel_tol * scale) break;
        bool grew = false;
        for (int d = 0; d < 3; ++d) {
            if (2 * res[static_cast<std::size_t>(d)] <= cap) {
                res[static_cast<std::size_t>(d)] *= 2;
                grew = true;
            }
        }
        if (!grew) break;
        q = integrate_form(c, left, right, res);
    }
    return q;
}

cplx integrate_scalar_dS(const Cycle3& c, const std::function<cplx(const Biquaternion&)>& g,
                         const std::array<int, 3>& res) {
    Biquaternion total;
    for (const auto& patch : c.patches) {
        std::array<Axis, 3> ax;
        for (int d = 0; d < 3; ++d)
            ax[static_cast<std::size_t>(d)] = make_axis(patch.lo[static_cast<std::size_t>(d)], patch.hi[static_cast<std::size_t>(d)],
                                                        patch.periodic[static_cast<std::size_t>(d)], res[static_cast<std::size_t>(d)]);
        const int n1 = static_cast<int>(ax[0].nodes.size());
        total += parallel_sum(n1, [&](int b, int e) {
            Biquaternion acc;
            for (int i1 = b; i1 < e; ++i1) {
                const double u1 = ax[0].nodes[static_cast<std::size_t>(i1)];
                const double w1 = ax[0].weights[static_cast<std::size_t>(i1)];
                for (std::size_t i2 = 0; i2 < ax[1].nodes.size(); ++i2)
                    for (std::size_t i3 = 0; i3 < ax[2].nodes.size(); ++i3) {
                        const double w = w1 * ax[1].weights[i2] * ax[2].weights[i3];
                        const double u2 = ax[1].nodes[i2], u3 = ax[2].nodes[i3];
                        const Biquaternion z = patch.chart(u1, u2, u3);
                        const auto t = patch.tangents_at(u1, u2, u3);
                        acc += (w * gram_volume(t) * g(z)) * Biquaternion::e0();
                    }
            }
            return acc;
        });
    }
    return total.z0;
}

double restriction_check(LevelKind kind, double r, int sample_count, unsigned long long seed) {
    if (!(r > 0.0)) throw std::invalid_argument("restriction_check: r must be positive");
    std::mt19937_64 rng(seed);
    const auto d = real_form_basis(RealFormTag::HR);
    double max_dev = 0.0;

    auto component_dev = [](const Biquaternion& a, const Biquaternion& b) {
        double m = 0.0;
        const auto ca = a.coeffs(), cb = b.coeffs();
        for (int k = 0; k < 4; ++k)
            m = std::max(m, std::abs(ca[static_cast<std::size_t>(k)] - cb[static_cast<std::size_t>(k)]));
        return m;
    };

    if (kind == LevelKind::norm_level) {
        const Cycle3 sph = sphere_HR(RealFormPoint{RealFormTag::HR, {0, 0, 0, 0}}, r);
        const auto& p = sph.patches[0];
        std::uniform_real_distribution<double> uth(0.05, 0.5 * std::numbers::pi - 0.05);
        std::uniform_real_distribution<double> uang(0.0, 2.0 * std::numbers::pi);
        for (int s = 0; s < sample_count; ++s) {
            const double th = uth(rng), ph = uang(rng), ps = uang(rng);
            const Biquaternion x = p.chart(th, ph, ps);
            const auto frame = p.tangent(th, ph, ps);
            const double dS = gram_volume(frame);
            if (dS < 1e-12) throw DegenerateFrame("restriction_check: rank-deficient frame");
            const Biquaternion lhs = eval_Dz(frame[0], frame[1], frame[2]);
            const Biquaternion rhs = (dS / r) * conjugate(x, ConjKind::minus);
            max_dev = std::max(max_dev, component_dev(lhs, rhs));
        }
    } else {
        std::uniform_real_distribution<double> upar(-0.8 * r, 0.8 * r);
        for (int s = 0; s < sample_count; ++s) {
            const double x1 = upar(rng), x2 = upar(rng), x3 = upar(rng);
            const double x0 = std::sqrt(r * r + x1 * x1 + x2 * x2 - x3 * x3);
            const Biquaternion x = x0 * d[0] + x1 * d[1] + x2 * d[2] + x3 * d[3];
            std::array<Biquaternion, 3> frame = {d[1] + (x1 / x0) * d[0],
                                                 d[2] + (x2 / x0) * d[0],
                                                 d[3] - (x3 / x0) * d[0]};
            const Biquaternion grad = 2.0 * (x0 * d[0] - x1 * d[1] - x2 * d[2] + x3 * d[3]);
            if (eval_dV(grad, frame[0], frame[1], frame[2]).real() < 0.0)
                std::swap(frame[0], frame[1]);
            const double dS = gram_volume(frame);
            if (dS < 1e-12) throw DegenerateFrame("restriction_check: rank-deficient frame");
            const Biquaternion lhs = eval_Dz(frame[0], frame[1], frame[2]);
            const Biquaternion rhs = (dS / euclid_norm(x)) * x;
            max_dev = std::max(max_dev, component_dev(lhs, rhs));
        }
    }
    return max_dev;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const int m = (n + 1) / 2;
    for (int k = 0; k < m; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(k)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - k)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[static_cast<std::size_t>(k)] = w;
        weights[static_cast<std::size_t>(n - 1 - k)] = w;
    }
}

void set_thread_count(int n) { g_thread_override.store(std::max(0, n)); }

} // namespace sq
