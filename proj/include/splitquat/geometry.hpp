#ifndef SPLITQUAT_GEOMETRY_HPP
#define SPLITQUAT_GEOMETRY_HPP

#include <array>
#include <functional>
#include <vector>

#include "splitquat/biquaternion.hpp"
#include "splitquat/calculus.hpp"

namespace sq {

/// Holomorphic volume form: determinant of the e-basis coordinates,
/// normalized by dV(e0,e1,e2,e3) = 1.
cplx eval_dV(const Biquaternion& z1, const Biquaternion& z2,
             const Biquaternion& z3, const Biquaternion& z4);

/// The HC-valued 3-form Dz on an ordered tangent triple, via the pairing-dual
/// formula sum_i dV(e_i, T2, T3, T4) e_i.
Biquaternion eval_Dz(const Biquaternion& t2, const Biquaternion& t3,
                     const Biquaternion& t4);

/// Independent evaluation of Dz from its matrix-coordinate expression;
/// cross-check oracle for eval_Dz.
Biquaternion eval_Dz_matrix_form(const Biquaternion& t2, const Biquaternion& t3,
                                 const Biquaternion& t4);

/// One smooth parameterized piece of a 3-cycle.
struct CyclePatch {
    std::function<Biquaternion(double, double, double)> chart;
    std::array<double, 3> lo{0.0, 0.0, 0.0};
    std::array<double, 3> hi{1.0, 1.0, 1.0};
    std::array<bool, 3> periodic{false, false, false};
    /// Analytic partials dZ/du_k; when absent, central differences with fd_step.
    std::function<std::array<Biquaternion, 3>(double, double, double)> tangent;
    double orientation = 1.0;
    double fd_step = 1e-6;

    std::array<Biquaternion, 3> tangents_at(double u1, double u2, double u3) const;
};

/// Oriented 3-cycle: one or more patches integrated together.
struct Cycle3 {
    std::vector<CyclePatch> patches;
};

struct QuadResult {
    Biquaternion value;
    double err_estimate = 0.0;
    std::array<int, 3> resolution{0, 0, 0};
};

/// Euclidean sphere S^3 of radius r in the affine subspace (H + center).
Cycle3 sphere_H(const Biquaternion& center, double r);

/// Euclidean sphere in the split form, parameterized by the split spherical
/// coordinates (theta, phi, psi) in [0,pi/2] x [0,2pi] x [0,2pi]; the
/// parameter frame is positively oriented as the boundary of the ball.
Cycle3 sphere_HR(const RealFormPoint& center, double r);

/// Boundary of an axis-aligned box in HR: eight outward-oriented faces.
Cycle3 box_boundary_HR(const RealFormPoint& center, const std::array<double, 4>& half_widths);

/// Pointwise application of h_{eps,Z0}(Z) = Z + i eps (Z - Z0)^-; tangents
/// transform by the same linear map.
Cycle3 deform(const Cycle3& c, double eps, const Biquaternion& z0);

/// Cluster the quadrature nodes of parameter `dim` around `where` with inner
/// scale `delta` (sinh map).  Resolves integrands with a near-singular layer
/// at fixed parameter value without raising the node count.
Cycle3 cluster_nodes(const Cycle3& c, int dim, double where, double delta);

/// sum of w * left(Z) * Dz(dZ) * right(Z) over tensor-product nodes:
/// Gauss-Legendre on non-periodic parameters, trapezoid on periodic ones.
/// err_estimate compares against the half-resolution grid.
QuadResult integrate_form(const Cycle3& c, const QFunction& left,
                          const QFunction& right, const std::array<int, 3>& res);

/// Doubles the resolution until the relative change drops below rel_tol or
/// the per-dimension cap is reached.
QuadResult integrate_form_refined(const Cycle3& c, const QFunction& left,
                                  const QFunction& right, std::array<int, 3> res,
                                  double rel_tol = 1e-8, int cap = 384);

/// Scalar surface integral sum w * g(Z) * dS over the cycle, with dS the
/// Euclidean 3-volume of the tangent frame.
cplx integrate_scalar_dS(const Cycle3& c, const std::function<cplx(const Biquaternion&)>& g,
                         const std::array<int, 3>& res);

enum class LevelKind { N_level, norm_level };

/// Samples oriented frames on {N(X)=r^2} or {||X||=r} in HR and returns the
/// max componentwise deviation of Dz from the restriction-lemma prediction.
double restriction_check(LevelKind kind, double r, int sample_count,
                         unsigned long long seed = 20260823ULL);

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Caps the worker-thread count used by the integrators; 0 restores the
/// hardware default.  Results are identical either way (fixed reduction order).
void set_thread_count(int n);

} // namespace sq

#endif
