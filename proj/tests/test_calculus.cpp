#include <doctest.h>

#include <random>

#include "splitquat/calculus.hpp"

using namespace sq;

namespace {

std::mt19937_64 rng(777);

Biquaternion random_bq(double scale = 2.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
            cplx(u(rng), u(rng))};
}

Biquaternion random_hr(double lo, double hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 4> x{u(rng), u(rng), u(rng), u(rng)};
    double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    if (n < 1e-6) { x = {1, 0, 0, 0}; n = 1.0; }
    std::uniform_real_distribution<double> rr(lo, hi);
    const double s = rr(rng) / n;
    return RealFormPoint{RealFormTag::HR, {s * x[0], s * x[1], s * x[2], s * x[3]}}.embed();
}

} // namespace

TEST_CASE("dirac of a constant vanishes identically") {
    const QFunction f = QFunction::constant(random_bq());
    for (DiracForm form : {DiracForm::H, DiracForm::HR, DiracForm::holomorphic})
        for (Side side : {Side::left, Side::right}) {
            const Biquaternion d =
                apply_dirac({DiracOp::nabla_plus, side, form}, f, random_bq(), 1e-3);
            CHECK(euclid_norm(d) < 1e-12);
        }
    CHECK(euclid_norm(apply_dirac({DiracOp::nabla, Side::left, DiracForm::HR}, f,
                                  random_bq(), 0.0)) == 0.0);
}

TEST_CASE("nabla of 1/N at 2e0 has the closed form -2 Z^+/N^2") {
    const QFunction f = QFunction::reciprocal_n(Biquaternion::zero());
    const Biquaternion z = 2.0 * Biquaternion::e0();
    // N(2e0) = 4, Z^+ = 2e0, so the derivative is -(1/4) e0
    const Biquaternion expect = -0.25 * Biquaternion::e0();
    const Biquaternion exact =
        apply_dirac({DiracOp::nabla, Side::left, DiracForm::holomorphic}, f, z, 0.0);
    CHECK(euclid_norm(exact - expect) < 1e-14);
    const Biquaternion fd =
        apply_dirac({DiracOp::nabla, Side::left, DiracForm::holomorphic}, f, z, 1e-3);
    CHECK(euclid_norm(fd - expect) < 1e-9);
}

TEST_CASE("exact derivatives match finite differences for the built-ins") {
    const QFunction funcs[] = {QFunction::kernel(Biquaternion::zero()),
                               QFunction::reciprocal_n(Biquaternion::zero()),
                               QFunction::polynomial({{{2, 0, 0, 0}, Biquaternion::e0()},
                                                      {{0, 1, 1, 0}, Biquaternion::e2()}})};
    for (const auto& f : funcs)
        for (int i = 0; i < 20; ++i) {
            const Biquaternion x = random_hr(1.2, 2.0);
            if (std::abs(quad_form_N(x)) < 0.5) continue;
            for (DiracOp op : {DiracOp::nabla, DiracOp::nabla_plus})
                for (Side side : {Side::left, Side::right}) {
                    const DiracSpec spec{op, side, DiracForm::HR};
                    const Biquaternion exact = apply_dirac(spec, f, x, 0.0);
                    const Biquaternion fd = apply_dirac(spec, f, x, 1e-3);
                    CHECK(euclid_norm(exact - fd) < 1e-6);
                }
        }
}

TEST_CASE("kernel is two-sided regular away from the cone") {
    const Biquaternion x0 = random_hr(0.0, 0.5);
    const QFunction k = QFunction::kernel(x0);
    const Biquaternion x = x0 + 3.0 * Biquaternion::e0();
    CHECK(regularity_residual(k, x, DiracForm::HR, Side::left, 1e-3) < 1e-5);
    CHECK(regularity_residual(k, x, DiracForm::HR, Side::right, 1e-3) < 1e-5);
}

TEST_CASE("x0 e0 is not regular and its residual is exactly the unit") {
    // the derivative of x^0 e0 under the HR operator contributes e0 * e0 = e0
    const QFunction f = QFunction::polynomial({{{1, 0, 0, 0}, Biquaternion::e0()}});
    const double res = regularity_residual(f, random_hr(0.5, 1.5), DiracForm::HR, Side::left, 1e-4);
    CHECK(res == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("residuals shrink at the FD order when h halves") {
    const QFunction k = QFunction::kernel(Biquaternion::zero());
    int measured = 0;
    for (int i = 0; i < 40 && measured < 10; ++i) {
        const Biquaternion x = random_hr(1.2, 2.0);
        if (std::abs(quad_form_N(x)) < 0.6) continue;
        const double r1 = regularity_residual(k, x, DiracForm::HR, Side::left, 2e-3);
        const double r2 = regularity_residual(k, x, DiracForm::HR, Side::left, 1e-3);
        if (r1 < 1e-9) continue; // below the roundoff floor, order not measurable
        ++measured;
        CHECK(r1 / r2 > 3.5);
    }
    CHECK(measured > 0);
}

TEST_CASE("stencil guard near the null cone") {
    const QFunction k = QFunction::kernel(Biquaternion::zero());
    // N = 0 on the cone; a point with tiny N trips the guard
    const Biquaternion near_cone =
        RealFormPoint{RealFormTag::HR, {1.0, 1.0, 1e-5, 0.0}}.embed();
    CHECK_THROWS_AS(apply_dirac({DiracOp::nabla_plus, Side::left, DiracForm::HR}, k,
                                near_cone, 1e-3),
                    StencilOutsideDomain);
}

TEST_CASE("wave operator vanishes on 1/N (harmonicity)") {
    const QFunction f = QFunction::reciprocal_n(5.0 * Biquaternion::e0());
    for (int i = 0; i < 20; ++i) {
        const Biquaternion x = random_hr(0.0, 1.0);
        CHECK(wave_residual(f, x, 1e-2) < 1e-4);
        CHECK(euclid_norm(apply_wave_operator(f, x, 1e-2)) < 1e-4);
    }
}

TEST_CASE("wave operator on (x0)^2 gives 2 e0") {
    const QFunction f = QFunction::polynomial({{{2, 0, 0, 0}, Biquaternion::e0()}});
    const Biquaternion w = apply_wave_operator(f, random_hr(0.2, 1.0), 1e-2);
    CHECK(euclid_norm(w - 2.0 * Biquaternion::e0()) < 1e-6);
}

TEST_CASE("wave operator equals the nested Dirac factorization") {
    const QFunction funcs[] = {QFunction::constant(random_bq()),
                               QFunction::reciprocal_n(4.0 * Biquaternion::e0()),
                               QFunction::polynomial({{{1, 1, 0, 0}, Biquaternion::e1()},
                                                      {{0, 0, 2, 0}, Biquaternion::e0()}})};
    for (const auto& f : funcs)
        for (int i = 0; i < 10; ++i)
            CHECK(wave_residual(f, random_hr(0.0, 1.0), 1e-2) < 1e-4);
}

TEST_CASE("form compatibility for holomorphic built-ins") {
    const QFunction f = QFunction::reciprocal_n(Biquaternion::zero());
    for (int i = 0; i < 10; ++i) {
        const Biquaternion x = random_hr(1.2, 2.0);
        if (std::abs(quad_form_N(x)) < 0.5) continue;
        Biquaternion vals[3];
        int j = 0;
        for (DiracForm form : {DiracForm::HR, DiracForm::holomorphic, DiracForm::M})
            vals[j++] = apply_dirac({DiracOp::nabla, Side::left, form}, f, x, 1e-3);
        CHECK(euclid_norm(vals[0] - vals[1]) < 1e-6);
        CHECK(euclid_norm(vals[1] - vals[2]) < 1e-12);
    }
}

TEST_CASE("chain rules for conjugation and inversion") {
    {
        const QFunction f = QFunction::constant(random_bq());
        const ChainRuleReport r = verify_chain_rules(f, 2.0 * Biquaternion::e0(), 1e-3);
        CHECK(r.residual_plus_of_conj < 1e-12);
        CHECK(r.residual_conj_of_plus < 1e-12);
        CHECK(r.residual_inverse < 1e-12);
    }
    {
        const QFunction f = QFunction::reciprocal_n(Biquaternion::zero());
        const ChainRuleReport r =
            verify_chain_rules(f, 2.0 * Biquaternion::e0() + Biquaternion::e3(), 1e-3);
        CHECK(r.residual_plus_of_conj < 1e-5);
        CHECK(r.residual_conj_of_plus < 1e-5);
        CHECK(r.residual_inverse < 1e-5);
    }
    {
        const QFunction f = QFunction::polynomial({{{1, 0, 0, 0}, Biquaternion::e0()}});
        const ChainRuleReport r =
            verify_chain_rules(f, Biquaternion::e0() + 0.5 * Biquaternion::e1(), 1e-3);
        CHECK(r.residual_plus_of_conj < 1e-8);
        CHECK(r.residual_conj_of_plus < 1e-8);
        CHECK(r.residual_inverse < 1e-7);
    }
    CHECK_THROWS_AS(verify_chain_rules(QFunction::constant(Biquaternion::e0()),
                                       Biquaternion::e0() + Biquaternion::et1(), 1e-3),
                    SingularElement);
}

TEST_CASE("h = 0 without a closed form is rejected") {
    const QFunction f = QFunction::custom([](const Biquaternion& z) { return z; });
    CHECK_THROWS_AS(apply_dirac({DiracOp::nabla, Side::left, DiracForm::HR}, f,
                                Biquaternion::e0(), 0.0),
                    std::invalid_argument);
}
