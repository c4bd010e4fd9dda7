#ifndef SPLITQUAT_BIQUATERNION_HPP
#define SPLITQUAT_BIQUATERNION_HPP

#include <array>
#include <complex>
#include <set>
#include <string>

#include "splitquat/errors.hpp"

namespace sq {

using cplx = std::complex<double>;

/// 2x2 complex matrix, row-major.  The matrix realization of a biquaternion.
struct Mat2 {
    cplx m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
    cplx det() const { return m11 * m22 - m12 * m21; }
    cplx trace() const { return m11 + m22; }
    /// Conjugate transpose.
    Mat2 adjoint() const {
        return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
    }
};

enum class RealFormTag { H, HR, M };

/// Element of the complexified quaternions, stored as the four complex
/// coefficients in the basis e0, e1, e2, e3.
struct Biquaternion {
    cplx z0{0.0}, z1{0.0}, z2{0.0}, z3{0.0};

    Biquaternion() = default;
    Biquaternion(cplx a0, cplx a1, cplx a2, cplx a3) : z0(a0), z1(a1), z2(a2), z3(a3) {}

    static Biquaternion zero() { return {}; }
    static Biquaternion e0() { return {1.0, 0.0, 0.0, 0.0}; }
    static Biquaternion e1() { return {0.0, 1.0, 0.0, 0.0}; }
    static Biquaternion e2() { return {0.0, 0.0, 1.0, 0.0}; }
    static Biquaternion e3() { return {0.0, 0.0, 0.0, 1.0}; }
    // Split units: et1 = i*e1, et2 = -i*e2.  Minkowski unit: et0 = -i*e0.
    static Biquaternion et1() { return {0.0, cplx(0.0, 1.0), 0.0, 0.0}; }
    static Biquaternion et2() { return {0.0, 0.0, cplx(0.0, -1.0), 0.0}; }
    static Biquaternion et0() { return {cplx(0.0, -1.0), 0.0, 0.0, 0.0}; }
    /// Diagonal matrix diag(1,-1), i.e. i*e3.
    static Biquaternion et3() { return {0.0, 0.0, 0.0, cplx(0.0, 1.0)}; }

    std::array<cplx, 4> coeffs() const { return {z0, z1, z2, z3}; }

    friend Biquaternion operator+(const Biquaternion& a, const Biquaternion& b) {
        return {a.z0 + b.z0, a.z1 + b.z1, a.z2 + b.z2, a.z3 + b.z3};
    }
    friend Biquaternion operator-(const Biquaternion& a, const Biquaternion& b) {
        return {a.z0 - b.z0, a.z1 - b.z1, a.z2 - b.z2, a.z3 - b.z3};
    }
    friend Biquaternion operator-(const Biquaternion& a) {
        return {-a.z0, -a.z1, -a.z2, -a.z3};
    }
    friend Biquaternion operator*(cplx s, const Biquaternion& a) {
        return {s * a.z0, s * a.z1, s * a.z2, s * a.z3};
    }
    friend Biquaternion operator*(const Biquaternion& a, cplx s) { return s * a; }
    friend Biquaternion operator*(double s, const Biquaternion& a) { return cplx(s) * a; }
    friend Biquaternion operator*(const Biquaternion& a, double s) { return cplx(s) * a; }
    Biquaternion& operator+=(const Biquaternion& b) {
        z0 += b.z0; z1 += b.z1; z2 += b.z2; z3 += b.z3;
        return *this;
    }
};

enum class ConjKind { c, plus, minus };

/// Quaternion product in the e-basis; agrees with the 2x2 matrix product.
Biquaternion mul(const Biquaternion& a, const Biquaternion& b);

Biquaternion conjugate(const Biquaternion& z, ConjKind kind);

/// N(Z) = Z Z^+ = (z0)^2 + (z1)^2 + (z2)^2 + (z3)^2 = det M(Z).
cplx quad_form_N(const Biquaternion& z);

/// S(Z) = z11 z22 + z12 z21 of the matrix view; S(X) = ||X||^2 on the split form.
cplx form_S(const Biquaternion& z);

/// Frobenius norm of the matrix view divided by sqrt(2); all basis units have norm 1.
double euclid_norm(const Biquaternion& z);

/// Symmetric complex-bilinear pairing (1/2) tr(Z^+ W); the e-basis is orthonormal.
cplx pairing(const Biquaternion& z, const Biquaternion& w);

/// Z^{-1} = Z^+ / N(Z).  Throws SingularElement when |N| is below the
/// scale-relative tolerance (null vectors of the split form).
Biquaternion inverse(const Biquaternion& z);

Mat2 to_matrix(const Biquaternion& z);
Biquaternion from_matrix(const Mat2& m);

/// Which real forms contain Z, each tested by its defining conjugation identity.
std::set<RealFormTag> classify_real_form(const Biquaternion& z, double tol = 1e-12);

/// Point of a real form given by four real coordinates in that form's basis.
struct RealFormPoint {
    RealFormTag tag = RealFormTag::HR;
    std::array<double, 4> coords{0.0, 0.0, 0.0, 0.0};

    Biquaternion embed() const;
};

/// The four basis directions of a real form as biquaternions.
std::array<Biquaternion, 4> real_form_basis(RealFormTag tag);

std::string to_string(const Biquaternion& z);

} // namespace sq

#endif
