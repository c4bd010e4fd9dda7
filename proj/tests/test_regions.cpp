#include <doctest.h>

#include <cmath>
#include <random>

#include "splitquat/regions.hpp"

using namespace sq;

namespace {

std::mt19937_64 rng(99);

SU11Params random_params() {
    std::uniform_real_distribution<double> ut(0.0, 3.0);
    std::uniform_real_distribution<double> ua(0.0, 2.0 * 3.14159265358979323846);
    return {ut(rng), ua(rng), ua(rng)};
}

Biquaternion diag(cplx a, cplx d) {
    return from_matrix({a, 0.0, 0.0, d});
}

} // namespace

TEST_CASE("su11_sample at the origin parameters is the identity") {
    const Biquaternion z = su11_sample({0.0, 0.0, 0.0});
    CHECK(euclid_norm(z - Biquaternion::e0()) < 1e-15);
}

TEST_CASE("su11_sample along the real axis is cosh t e0 + sinh t et1") {
    const double t = 0.8;
    const Biquaternion z = su11_sample({t, 0.0, 0.0});
    const Biquaternion expect =
        std::cosh(t) * Biquaternion::e0() + std::sinh(t) * Biquaternion::et1();
    CHECK(euclid_norm(z - expect) < 1e-14);
    // its matrix is symmetric with eigenvalues e^{+t}, e^{-t}
    const auto m = to_matrix(z);
    CHECK(std::abs(m.m11 - std::cosh(t)) < 1e-14);
    CHECK(std::abs(m.m12 - std::sinh(t)) < 1e-14);
}

TEST_CASE("su11_sample lands in the split real form with unit norm") {
    for (int i = 0; i < 100; ++i) {
        const Biquaternion z = su11_sample(random_params());
        const auto forms = classify_real_form(z, 1e-12);
        CHECK(forms.count(RealFormTag::HR) == 1);
        CHECK(std::abs(quad_form_N(z) - 1.0) < 1e-12);
    }
}

TEST_CASE("diagonal examples classify into the forward semigroup") {
    // diag(2, 1/2): semisimple with real eigenvalues outside the unit circle
    const Gamma0Verdict g = gamma0_classify(diag(2.0, 0.5));
    CHECK(g.in_gamma0);
    CHECK(!g.in_gamma0_bar);
    CHECK(g.eig_min > 0.0);
}

TEST_CASE("the backward semigroup is the image under inversion") {
    const Gamma0Verdict g = gamma0_classify(diag(0.5, 2.0));
    CHECK(!g.in_gamma0);
    CHECK(g.in_gamma0_bar);
}

TEST_CASE("the identity belongs to neither open semigroup") {
    const Gamma0Verdict g = gamma0_classify(Biquaternion::e0());
    CHECK(!g.in_gamma0);
    CHECK(!g.in_gamma0_bar);
    CHECK(std::abs(g.eig_min) < 1e-12);
    CHECK(std::abs(g.eig_max) < 1e-12);
}

TEST_CASE("membership in the two semigroups is exclusive") {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const Biquaternion z{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
                             cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        const Gamma0Verdict g = gamma0_classify(z);
        CHECK(!(g.in_gamma0 && g.in_gamma0_bar));
        CHECK(g.eig_min <= g.eig_max + 1e-15);
    }
}

TEST_CASE("inversion swaps the two semigroups") {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int found = 0;
    for (int i = 0; i < 400 && found < 50; ++i) {
        const Biquaternion z{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
                             cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        const Gamma0Verdict g = gamma0_classify(z);
        if (!g.in_gamma0) continue;
        ++found;
        CHECK(gamma0_classify(inverse(z)).in_gamma0_bar);
    }
    CHECK(found > 0);
}

TEST_CASE("the forward semigroup is closed under multiplication") {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::vector<Biquaternion> members;
    while (members.size() < 30) {
        const Biquaternion z{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)),
                             cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        if (gamma0_classify(z).in_gamma0) members.push_back(z);
    }
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const Biquaternion p = mul(members[pick(rng)], members[pick(rng)]);
        CHECK(gamma0_classify(p).in_gamma0);
    }
}

TEST_CASE("the group itself sits on the common boundary") {
    for (int i = 0; i < 20; ++i) {
        const Gamma0Verdict g = gamma0_classify(su11_sample(random_params()));
        CHECK(!g.in_gamma0);
        CHECK(!g.in_gamma0_bar);
        CHECK(std::abs(g.eig_min) < 1e-9);
        CHECK(std::abs(g.eig_max) < 1e-9);
    }
}

TEST_CASE("omega margin at the origin is exactly one") {
    // |N(X - 0)| = |N(X)| = 1 for every group element
    CHECK(omega_margin(Biquaternion::zero()) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("omega margin vanishes for points on or reachable by the group") {
    // 2 e0 = su11_sample(t, a, b) * lambda has solutions approaching the
    // group's cone of translates, so the infimum over X of |N(X - 2e0)| is 0
    CHECK(omega_margin(2.0 * Biquaternion::e0()) < 1e-3);
}

TEST_CASE("omega margin stays bounded below for imaginary translates") {
    // x0 = 5i e0: N(X - x0) = 1 - 25 - 10 i <X, e0> keeps |.| >= 1
    CHECK(omega_margin(cplx(0.0, 5.0) * Biquaternion::e0()) >= 1.0);
}

TEST_CASE("omega margin is non-increasing in the truncation radius") {
    const Biquaternion x0 =
        Biquaternion(cplx(0.3, 0.2), cplx(0.1, -0.4), cplx(-0.2, 0.1), cplx(0.5, 0.3));
    const double m2 = omega_margin(x0, 2.0, {48, 48, 48});
    const double m4 = omega_margin(x0, 4.0, {48, 48, 48});
    const double m6 = omega_margin(x0, 6.0, {48, 48, 48});
    CHECK(m4 <= m2 + 1e-12);
    CHECK(m6 <= m4 + 1e-12);
}

TEST_CASE("region_classify aggregates both verdicts") {
    const RegionVerdict r = region_classify(diag(2.0, 0.5));
    CHECK(r.in_gamma0);
    CHECK(!r.in_gamma0_bar);
    CHECK(r.omega_margin > 0.0);
    CHECK(r.truncation_t_max == doctest::Approx(6.0));

    const RegionVerdict id = region_classify(Biquaternion::e0());
    CHECK(!id.in_gamma0);
    CHECK(!id.in_gamma0_bar);
    CHECK(id.omega_margin < 1e-3); // e0 lies on the group itself
}
