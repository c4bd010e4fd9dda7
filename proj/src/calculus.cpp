#include "splitquat/calculus.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace sq {

namespace {

bool finite(const Biquaternion& z) {
    auto ok = [](cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); };
    return ok(z.z0) && ok(z.z1) && ok(z.z2) && ok(z.z3);
}

Biquaternion kernel_value(const Biquaternion& w) {
    const cplx n = quad_form_N(w);
    const cplx n2 = n * n;
    if (std::abs(n2) == 0.0) throw SingularElement("kernel evaluated on the null cone");
    const Biquaternion wp = conjugate(w, ConjKind::plus);
    return (1.0 / n2) * wp;
}

} // namespace

QFunction QFunction::constant(const Biquaternion& c) {
    QFunction f;
    f.kind = FuncKind::Constant;
    f.eval = [c](const Biquaternion&) { return c; };
    f.exact_dirac = [](const DiracSpec&, const Biquaternion&) { return Biquaternion::zero(); };
    return f;
}

QFunction QFunction::kernel(const Biquaternion& z0) {
    QFunction f;
    f.kind = FuncKind::Kernel;
    f.center = z0;
    f.eval = [z0](const Biquaternion& z) { return kernel_value(z - z0); };
    f.exact_dirac = [z0](const DiracSpec& spec, const Biquaternion& z) {
        if (spec.op == DiracOp::nabla_plus) return Biquaternion::zero();
        // nabla k = k nabla = -2 e0/N^2 - 4 (W^+)^2 / N^3,  W = Z - Z0.
        const Biquaternion w = z - z0;
        const cplx n = quad_form_N(w);
        if (std::abs(n) == 0.0) throw SingularElement("kernel derivative on the null cone");
        const Biquaternion wp = conjugate(w, ConjKind::plus);
        return (-2.0 / (n * n)) * Biquaternion::e0() + (-4.0 / (n * n * n)) * mul(wp, wp);
    };
    return f;
}

QFunction QFunction::reciprocal_n(const Biquaternion& z0) {
    QFunction f;
    f.kind = FuncKind::ReciprocalN;
    f.center = z0;
    f.eval = [z0](const Biquaternion& z) {
        const cplx n = quad_form_N(z - z0);
        if (std::abs(n) == 0.0) throw SingularElement("1/N evaluated on the null cone");
        return (1.0 / n) * Biquaternion::e0();
    };
    f.exact_dirac = [z0](const DiracSpec& spec, const Biquaternion& z) {
        const Biquaternion w = z - z0;
        const cplx n = quad_form_N(w);
        if (std::abs(n) == 0.0) throw SingularElement("1/N derivative on the null cone");
        const cplx inv_n2 = 1.0 / (n * n);
        // Scalar-valued function: left and right applications agree.
        if (spec.op == DiracOp::nabla)
            return (-2.0 * inv_n2) * conjugate(w, ConjKind::plus);
        return (-2.0 * inv_n2) * w;
    };
    return f;
}

QFunction QFunction::polynomial(std::vector<Monomial> terms) {
    QFunction f;
    f.kind = FuncKind::Polynomial;
    auto shared = std::make_shared<std::vector<Monomial>>(std::move(terms));
    f.eval = [shared](const Biquaternion& z) {
        const std::array<cplx, 4> c = z.coeffs();
        Biquaternion out;
        for (const auto& t : *shared) {
            cplx v = 1.0;
            for (int k = 0; k < 4; ++k)
                for (int p = 0; p < t.powers[static_cast<std::size_t>(k)]; ++p) v *= c[static_cast<std::size_t>(k)];
            out += v * t.coeff;
        }
        return out;
    };
    f.exact_dirac = [shared](const DiracSpec& spec, const Biquaternion& z) {
        // Polynomials in z0..z3 are holomorphic, so every form's Dirac
        // operator agrees with the complex-coordinate one.
        const auto co = dirac_coefficients(spec.op, DiracForm::holomorphic);
        const std::array<cplx, 4> c = z.coeffs();
        Biquaternion out;
        for (int k = 0; k < 4; ++k) {
            Biquaternion dk; // partial derivative of the polynomial in z^k
            for (const auto& t : *shared) {
                const int pk = t.powers[static_cast<std::size_t>(k)];
                if (pk == 0) continue;
                cplx v = static_cast<double>(pk);
                for (int j = 0; j < 4; ++j) {
                    const int pj = t.powers[static_cast<std::size_t>(j)] - (j == k ? 1 : 0);
                    for (int p = 0; p < pj; ++p) v *= c[static_cast<std::size_t>(j)];
                }
                dk += v * t.coeff;
            }
            if (spec.side == Side::left)
                out += mul(co.units[static_cast<std::size_t>(k)], dk);
            else
                out += mul(dk, co.units[static_cast<std::size_t>(k)]);
        }
        return out;
    };
    return f;
}

QFunction QFunction::custom(std::function<Biquaternion(const Biquaternion&)> fn) {
    QFunction f;
    f.kind = FuncKind::Custom;
    f.eval = std::move(fn);
    return f;
}

DiracCoefficients dirac_coefficients(DiracOp op, DiracForm form) {
    const Biquaternion e0 = Biquaternion::e0();
    const Biquaternion e1 = Biquaternion::e1();
    const Biquaternion e2 = Biquaternion::e2();
    const Biquaternion e3 = Biquaternion::e3();
    const Biquaternion t1 = Biquaternion::et1();
    const Biquaternion t2 = Biquaternion::et2();
    DiracCoefficients c;
    switch (form) {
        case DiracForm::H:
        case DiracForm::holomorphic:
        case DiracForm::M: // exposed through the holomorphic route
            c.directions = {e0, e1, e2, e3};
            if (op == DiracOp::nabla_plus)
                c.units = {e0, e1, e2, e3};
            else
                c.units = {e0, -e1, -e2, -e3};
            break;
        case DiracForm::HR:
            c.directions = {e0, t1, t2, e3};
            if (op == DiracOp::nabla_plus)
                c.units = {e0, -t1, -t2, e3};
            else
                c.units = {e0, t1, t2, -e3};
            break;
    }
    return c;
}

Biquaternion apply_dirac(const DiracSpec& spec, const QFunction& f,
                         const Biquaternion& x, double h) {
    if (h == 0.0) {
        if (!f.has_exact())
            throw std::invalid_argument("apply_dirac: h = 0 requires a closed-form derivative");
        return f.exact_dirac(spec, x);
    }
    if (h < 0.0) throw std::invalid_argument("apply_dirac: negative step");

    const DiracCoefficients co = dirac_coefficients(spec.op, spec.form);
    const bool kernel_family = f.kind == FuncKind::Kernel || f.kind == FuncKind::ReciprocalN;

    Biquaternion out;
    for (int k = 0; k < 4; ++k) {
        // fourth-order five-point central stencil
        std::array<Biquaternion, 4> pts{x + 2.0 * h * co.directions[static_cast<std::size_t>(k)],
                                        x + h * co.directions[static_cast<std::size_t>(k)],
                                        x - h * co.directions[static_cast<std::size_t>(k)],
                                        x - 2.0 * h * co.directions[static_cast<std::size_t>(k)]};
        std::array<Biquaternion, 4> fv;
        for (int j = 0; j < 4; ++j) {
            const Biquaternion& p = pts[static_cast<std::size_t>(j)];
            if (kernel_family && std::abs(quad_form_N(p - f.center)) < 10.0 * h)
                throw StencilOutsideDomain("apply_dirac: stencil crosses the null cone");
            try {
                fv[static_cast<std::size_t>(j)] = f(p);
            } catch (const SingularElement&) {
                throw StencilOutsideDomain("apply_dirac: evaluation failed at a stencil point");
            }
            if (!finite(fv[static_cast<std::size_t>(j)]))
                throw StencilOutsideDomain("apply_dirac: non-finite value at a stencil point");
        }
        const Biquaternion d =
            (1.0 / (12.0 * h)) * (-fv[0] + 8.0 * fv[1] - 8.0 * fv[2] + fv[3]);
        if (spec.side == Side::left)
            out += mul(co.units[static_cast<std::size_t>(k)], d);
        else
            out += mul(d, co.units[static_cast<std::size_t>(k)]);
    }
    return out;
}

double regularity_residual(const QFunction& f, const Biquaternion& x,
                           DiracForm form, Side side, double h) {
    return euclid_norm(apply_dirac({DiracOp::nabla_plus, side, form}, f, x, h));
}

Biquaternion apply_wave_operator(const QFunction& f, const Biquaternion& x, double h) {
    const auto dirs = real_form_basis(RealFormTag::HR);
    const double sign[4] = {1.0, -1.0, -1.0, 1.0};
    const Biquaternion fc = f(x);
    Biquaternion out;
    for (int k = 0; k < 4; ++k) {
        // fourth-order five-point second-difference stencil
        const Biquaternion& d = dirs[static_cast<std::size_t>(k)];
        const Biquaternion fp2 = f(x + 2.0 * h * d), fp = f(x + h * d);
        const Biquaternion fm = f(x - h * d), fm2 = f(x - 2.0 * h * d);
        out += (sign[k] / (12.0 * h * h)) *
               (-fp2 + 16.0 * fp - 30.0 * fc + 16.0 * fm - fm2);
    }
    return out;
}

double wave_residual(const QFunction& f, const Biquaternion& x, double h) {
    const Biquaternion direct = apply_wave_operator(f, x, h);
    QFunction g = QFunction::custom([&f, h](const Biquaternion& y) {
        return apply_dirac({DiracOp::nabla_plus, Side::left, DiracForm::HR}, f, y, h);
    });
    const Biquaternion factored =
        apply_dirac({DiracOp::nabla, Side::left, DiracForm::HR}, g, x, h);
    return euclid_norm(direct - factored);
}

ChainRuleReport verify_chain_rules(const QFunction& f, const Biquaternion& z, double h) {
    ChainRuleReport r{};
    QFunction f_of_conj = QFunction::custom(
        [&f](const Biquaternion& w) { return f(conjugate(w, ConjKind::plus)); });
    const Biquaternion zp = conjugate(z, ConjKind::plus);

    const Biquaternion lhs1 =
        apply_dirac({DiracOp::nabla, Side::left, DiracForm::holomorphic}, f_of_conj, z, h);
    const Biquaternion rhs1 =
        apply_dirac({DiracOp::nabla_plus, Side::left, DiracForm::holomorphic}, f, zp, h);
    r.residual_plus_of_conj = euclid_norm(lhs1 - rhs1);

    const Biquaternion lhs2 =
        apply_dirac({DiracOp::nabla_plus, Side::left, DiracForm::holomorphic}, f_of_conj, z, h);
    const Biquaternion rhs2 =
        apply_dirac({DiracOp::nabla, Side::left, DiracForm::holomorphic}, f, zp, h);
    r.residual_conj_of_plus = euclid_norm(lhs2 - rhs2);

    const Biquaternion zi = inverse(z); // throws SingularElement if N(Z) ~ 0
    QFunction f_of_inv = QFunction::custom(
        [&f](const Biquaternion& w) { return f(inverse(w)); });
    const Biquaternion lhs3 =
        apply_dirac({DiracOp::nabla, Side::left, DiracForm::holomorphic}, f_of_inv, z, h);
    const Biquaternion df_at_inv =
        apply_dirac({DiracOp::nabla, Side::left, DiracForm::holomorphic}, f, zi, h);
    const Biquaternion rhs3 = -mul(zi, mul(df_at_inv, zi));
    r.residual_inverse = euclid_norm(lhs3 - rhs3);
    return r;
}

} // namespace sq
