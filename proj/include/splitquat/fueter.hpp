#ifndef SPLITQUAT_FUETER_HPP
#define SPLITQUAT_FUETER_HPP

#include <utility>
#include <vector>

#include "splitquat/geometry.hpp"

namespace sq {

struct FueterQuery {
    QFunction f;
    Cycle3 boundary;
    Biquaternion x0;
    Side side = Side::left;
    double eps = 0.1;
    std::array<int, 3> res{48, 48, 48};
};

/// Classical Cauchy-Fueter evaluation over a boundary in H:
/// (1/2pi^2) * integral of kernel . Dx . f  (left) or f . Dx . kernel (right).
Biquaternion cf_classical(const FueterQuery& q);

/// Holomorphically deformed variant over a boundary in HR:
/// -(1/2pi^2) * integral over h_{eps,X0}(boundary) of kernel . Dz . f.
Biquaternion cf_deformed(const FueterQuery& q);

struct RegularizedResult {
    Biquaternion value;
    double transversality_margin = 0.0;
    bool cone_tangency_warning = false;
};

/// Single-eps regularized evaluation:
/// -(1/2pi^2) * integral of (X-X0)^+ / (N(X-X0) + i eps ||X-X0||^2)^2 . Dz . f.
RegularizedResult cf_regularized(const FueterQuery& q);

struct EpsSchedule {
    std::vector<double> values{0.2, 0.1, 0.05, 0.025}; // strictly decreasing toward 0
    int extrapolation_order = 2;
    double stability_tol = 1e-2;
    /// Extrapolate in eps^2 (true) or in eps (false).  The interior expansion
    /// is even; exterior points can carry an odd-order boundary term.
    bool even_powers = true;
};

struct ExtrapolationResult {
    Biquaternion value;
    double stability = 0.0; // norm of the last extrapolation correction
};

/// Richardson extrapolation to eps -> 0 assuming an expansion in even powers.
ExtrapolationResult eps_extrapolate(const std::vector<std::pair<double, Biquaternion>>& samples,
                                    const EpsSchedule& schedule);

/// Runs cf_regularized over the schedule and extrapolates.
ExtrapolationResult cf_regularized_extrapolated(const FueterQuery& q, const EpsSchedule& schedule);

/// Numerical check of the closed-form sphere integral
/// r * integral_{S_r} dS / (N(X) + i eps r^2)^2 = -2 pi^2 / (1 + eps^2).
cplx sphere_kernel_integral(double r, double eps, const std::array<int, 3>& res);

/// Regularized theta-distribution integral
/// integral over [a,b] of g(theta) / (cos 2theta + i eps)^n dtheta,
/// evaluated through the integration-by-parts rewrite so it stays stable as
/// eps -> 0; the sign of eps selects the +i0 / -i0 boundary value.
cplx theta_regularized(const std::function<cplx(double)>& g, int n, double eps,
                       double window_lo, double window_hi);

/// Minimum |directional derivative of N(X - x0)| over boundary points near the
/// null cone of x0; +infinity when the boundary misses the cone.
double transversality_margin(const Cycle3& boundary, const Biquaternion& x0,
                             int grid_per_dim = 24);

/// Deviation between the deformed-boundary integral of kernel . Dz . f and the
/// homologous reference: the oppositely oriented Euclidean sphere of radius r
/// around x0 (inside case) or zero (outside case).
double homotopy_check(const Cycle3& boundary, const Biquaternion& x0, bool x0_inside,
                      double eps, double r, const QFunction& f,
                      const std::array<int, 3>& res);

} // namespace sq

#endif
