#include "splitquat/biquaternion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sq {

Biquaternion mul(const Biquaternion& a, const Biquaternion& b) {
    return {a.z0 * b.z0 - a.z1 * b.z1 - a.z2 * b.z2 - a.z3 * b.z3,
            a.z0 * b.z1 + a.z1 * b.z0 + a.z2 * b.z3 - a.z3 * b.z2,
            a.z0 * b.z2 - a.z1 * b.z3 + a.z2 * b.z0 + a.z3 * b.z1,
            a.z0 * b.z3 + a.z1 * b.z2 - a.z2 * b.z1 + a.z3 * b.z0};
}

Biquaternion conjugate(const Biquaternion& z, ConjKind kind) {
    switch (kind) {
        case ConjKind::c:
            return {std::conj(z.z0), std::conj(z.z1), std::conj(z.z2), std::conj(z.z3)};
        case ConjKind::plus:
            return {z.z0, -z.z1, -z.z2, -z.z3};
        case ConjKind::minus:
            // -e3 Z e3: negates the e1 and e2 components.
            return {z.z0, -z.z1, -z.z2, z.z3};
    }
    return z;
}

cplx quad_form_N(const Biquaternion& z) {
    return z.z0 * z.z0 + z.z1 * z.z1 + z.z2 * z.z2 + z.z3 * z.z3;
}

cplx form_S(const Biquaternion& z) {
    // z11 z22 + z12 z21 = z0^2 + z3^2 - z1^2 - z2^2.
    return z.z0 * z.z0 + z.z3 * z.z3 - z.z1 * z.z1 - z.z2 * z.z2;
}

double euclid_norm(const Biquaternion& z) {
    return std::sqrt(std::norm(z.z0) + std::norm(z.z1) + std::norm(z.z2) + std::norm(z.z3));
}

cplx pairing(const Biquaternion& z, const Biquaternion& w) {
    return z.z0 * w.z0 + z.z1 * w.z1 + z.z2 * w.z2 + z.z3 * w.z3;
}

Biquaternion inverse(const Biquaternion& z) {
    const cplx n = quad_form_N(z);
    const double en = euclid_norm(z);
    const double tol = 1e-12 * std::max(1.0, en * en);
    if (std::abs(n) <= tol)
        throw SingularElement("inverse: N(Z) = " + std::to_string(std::abs(n)) +
                              " below tolerance (null element)");
    const cplx inv_n = 1.0 / n;
    return {z.z0 * inv_n, -z.z1 * inv_n, -z.z2 * inv_n, -z.z3 * inv_n};
}

Mat2 to_matrix(const Biquaternion& z) {
    const cplx i(0.0, 1.0);
    return {z.z0 - i * z.z3, -i * z.z1 - z.z2,
            -i * z.z1 + z.z2, z.z0 + i * z.z3};
}

Biquaternion from_matrix(const Mat2& m) {
    const cplx i(0.0, 1.0);
    return {0.5 * (m.m11 + m.m22),
            0.5 * i * (m.m12 + m.m21),
            0.5 * (m.m21 - m.m12),
            0.5 * i * (m.m11 - m.m22)};
}

std::set<RealFormTag> classify_real_form(const Biquaternion& z, double tol) {
    auto close = [tol](const Biquaternion& a, const Biquaternion& b) {
        return std::abs(a.z0 - b.z0) <= tol && std::abs(a.z1 - b.z1) <= tol &&
               std::abs(a.z2 - b.z2) <= tol && std::abs(a.z3 - b.z3) <= tol;
    };
    std::set<RealFormTag> tags;
    const Biquaternion zc = conjugate(z, ConjKind::c);
    if (close(zc, z)) tags.insert(RealFormTag::H);
    if (close(conjugate(zc, ConjKind::minus), z)) tags.insert(RealFormTag::HR);
    if (close(conjugate(zc, ConjKind::plus), -z)) tags.insert(RealFormTag::M);
    return tags;
}

std::array<Biquaternion, 4> real_form_basis(RealFormTag tag) {
    switch (tag) {
        case RealFormTag::H:
            return {Biquaternion::e0(), Biquaternion::e1(), Biquaternion::e2(),
                    Biquaternion::e3()};
        case RealFormTag::HR:
            return {Biquaternion::e0(), Biquaternion::et1(), Biquaternion::et2(),
                    Biquaternion::e3()};
        case RealFormTag::M:
            return {Biquaternion::et0(), Biquaternion::e1(), Biquaternion::e2(),
                    Biquaternion::e3()};
    }
    return {};
}

Biquaternion RealFormPoint::embed() const {
    const auto basis = real_form_basis(tag);
    Biquaternion z;
    for (int k = 0; k < 4; ++k) z += coords[static_cast<std::size_t>(k)] * basis[static_cast<std::size_t>(k)];
    return z;
}

std::string to_string(const Biquaternion& z) {
    std::ostringstream os;
    os << "(" << z.z0.real() << "+" << z.z0.imag() << "i)e0 + "
       << "(" << z.z1.real() << "+" << z.z1.imag() << "i)e1 + "
       << "(" << z.z2.real() << "+" << z.z2.imag() << "i)e2 + "
       << "(" << z.z3.real() << "+" << z.z3.imag() << "i)e3";
    return os.str();
}

} // namespace sq
