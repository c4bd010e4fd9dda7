#ifndef SPLITQUAT_REGIONS_HPP
#define SPLITQUAT_REGIONS_HPP

#include "splitquat/biquaternion.hpp"

namespace sq {

struct SU11Params {
    double t = 0.0;     // hyperbolic radius, >= 0
    double alpha = 0.0; // phases in [0, 2pi)
    double beta = 0.0;
};

/// (cosh t e^{i a}, sinh t e^{i b}; sinh t e^{-i b}, cosh t e^{-i a});
/// lies in HR with N = 1.
Biquaternion su11_sample(const SU11Params& p);

/// Eigenvalues of the Hermitian matrix Z* diag(1,-1) Z - diag(1,-1); Z is in
/// the forward Ol'shanskii semigroup iff both exceed the definiteness
/// tolerance, and in the backward one iff both are below its negative.
struct Gamma0Verdict {
    bool in_gamma0 = false;
    bool in_gamma0_bar = false;
    double eig_min = 0.0;
    double eig_max = 0.0;
};
Gamma0Verdict gamma0_classify(const Biquaternion& z, double tol = 1e-10);

struct RegionVerdict {
    bool in_gamma0 = false;
    bool in_gamma0_bar = false;
    double omega_margin = 0.0;
    double truncation_t_max = 0.0;
};

/// Estimated inf |N(X - x0)| over SU(1,1) truncated at t <= t_max: grid scan
/// followed by coordinate-descent refinement around the grid minimum.
double omega_margin(const Biquaternion& x0, double t_max = 6.0,
                    const std::array<int, 3>& grid = {64, 64, 64});

RegionVerdict region_classify(const Biquaternion& x0, double t_max = 6.0,
                              const std::array<int, 3>& grid = {64, 64, 64});

} // namespace sq

#endif
