// Acceptance harness: runs the nine top-level verification criteria and
// prints one PASS/FAIL line per criterion.  Exit status is the number of
// failed criteria (0 on full success).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "splitquat/experiments.hpp"
#include "splitquat/fueter.hpp"

using namespace sq;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int idx, const char* name, bool ok, double worst, double budget_ms) {
    std::printf("criterion %d (%s): %s   worst=%.3e   %.1fs\n", idx, name,
                ok ? "PASS" : "FAIL", worst, budget_ms / 1000.0);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

/// Runs a configured experiment and folds its rows into (ok, worst margin).
std::pair<bool, double> run_experiment(const std::string& name,
                                       std::map<std::string, std::string> params) {
    ExperimentConfig cfg;
    cfg.experiment = name;
    cfg.parameters = std::move(params);
    const RunReport rep = run(cfg);
    double worst = 0.0;
    for (const auto& row : rep.rows) worst = std::max(worst, row.abs_error);
    return {rep.all_within_tolerance(), worst};
}

Biquaternion random_hr(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 4> x{u(rng), u(rng), u(rng), u(rng)};
    double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    if (n < 1e-6) { x = {1, 0, 0, 0}; n = 1.0; }
    std::uniform_real_distribution<double> rr(lo, hi);
    const double s = rr(rng) / n;
    return RealFormPoint{RealFormTag::HR, {s * x[0], s * x[1], s * x[2], s * x[3]}}.embed();
}

void criterion_sphere_kernel() {
    const double t0 = now_ms();
    bool ok = true;
    double worst = 0.0;
    for (double r : {1.0, 2.0})
        for (double eps : {1.0, 0.1, 0.01}) {
            const cplx expect = cplx(-2.0 * kPi * kPi) / (1.0 + eps * eps);
            const cplx got = sphere_kernel_integral(r, eps, {160, 48, 48});
            const double rel = std::abs(got - expect) / std::abs(expect);
            worst = std::max(worst, rel);
            ok = ok && rel <= 1e-6;
        }
    report(1, "sphere-kernel identity", ok, worst, now_ms() - t0);
}

void criterion_classical() {
    const double t0 = now_ms();
    bool ok = true;
    double worst = 0.0;
    for (const char* f : {"const", "kernel"}) {
        auto [o, w] = run_experiment("fueter-classical",
                                     {{"f", f},
                                      {"interior", "20"},
                                      {"exterior", "20"},
                                      {"res", "64x48x48"},
                                      {"tol", "1e-6"}});
        ok = ok && o;
        worst = std::max(worst, w);
    }
    report(2, "classical reproduction", ok, worst, now_ms() - t0);
}

void criterion_deformed() {
    const double t0 = now_ms();
    bool ok = true;
    double worst = 0.0;
    const Cycle3 sph = sphere_HR(RealFormPoint{}, 1.0);
    const QFunction funcs[] = {
        QFunction::constant(Biquaternion::e0() + 0.4 * Biquaternion::e2()),
        QFunction::kernel(5.0 * Biquaternion::e0())};
    std::mt19937_64 rng(20240517);

    // interior points near the null cone need substantially more nodes as
    // eps shrinks; exterior integrands are smooth and converge much earlier
    auto res_for = [](double abs_eps, bool inside) -> std::array<int, 3> {
        if (abs_eps > 0.15)
            return inside ? std::array<int, 3>{96, 72, 72}
                          : std::array<int, 3>{64, 48, 48};
        if (abs_eps > 0.075)
            return inside ? std::array<int, 3>{128, 96, 96}
                          : std::array<int, 3>{96, 72, 72};
        return inside ? std::array<int, 3>{224, 168, 168}
                      : std::array<int, 3>{128, 96, 96};
    };

    for (const QFunction& f : funcs)
        for (int i = 0; i < 40; ++i) {
            const bool inside = i < 20;
            const Biquaternion x0 =
                inside ? random_hr(rng, 0.0, 0.5) : random_hr(rng, 1.75, 2.5);
            const Biquaternion ref = inside ? f(x0) : Biquaternion::zero();
            for (double sign : {1.0, -1.0}) {
                std::vector<Biquaternion> vals;
                for (double abs_eps : {0.2, 0.1, 0.05}) {
                    FueterQuery q{f, sph, x0, Side::left, sign * abs_eps,
                                  res_for(abs_eps, inside)};
                    const Biquaternion v = cf_deformed(q);
                    vals.push_back(v);
                    const double err = euclid_norm(v - ref);
                    worst = std::max(worst, err);
                    ok = ok && err <= 1e-5;
                }
                // constancy across eps at a fixed sign
                for (std::size_t a = 0; a < vals.size(); ++a)
                    for (std::size_t b = a + 1; b < vals.size(); ++b) {
                        const double spread = euclid_norm(vals[a] - vals[b]);
                        ok = ok && spread <= 1e-6;
                    }
            }
        }
    report(3, "deformed-contour reproduction and eps-constancy", ok, worst,
           now_ms() - t0);
}

void criterion_regularized() {
    const double t0 = now_ms();
    bool ok = true;
    double worst = 0.0;
    for (const char* boundary : {"sphere", "box"})
        for (const char* f : {"const", "kernel"}) {
            auto [o, w] = run_experiment("fueter-regularized",
                                         {{"f", f},
                                          {"boundary", boundary},
                                          {"interior", "2"},
                                          {"exterior", "2"},
                                          {"tol", "1e-3"}});
            ok = ok && o;
            worst = std::max(worst, w);
        }
    // single-eps constant-case values must match c/(1+eps^2) tightly
    auto [o, w] = run_experiment("eps-sweep", {{"tol", "1e-6"}});
    ok = ok && o;
    worst = std::max(worst, w);
    report(4, "regularized limit at desk scale", ok, worst, now_ms() - t0);
}

void criterion_restriction() {
    const double t0 = now_ms();
    auto [ok, worst] =
        run_experiment("restriction-lemma", {{"samples", "500"}, {"tol", "1e-10"}});
    report(5, "restriction identities", ok, worst, now_ms() - t0);
}

void criterion_regularity() {
    const double t0 = now_ms();
    auto [ok, worst] = run_experiment("kernel-regularity", {{"samples", "100"},
                                                           {"h", "1e-3"},
                                                           {"tol", "1e-5"},
                                                           {"wave_tol", "1e-4"}});
    report(6, "kernel regularity and harmonicity", ok, worst, now_ms() - t0);
}

void criterion_algebra() {
    const double t0 = now_ms();
    auto [ok, worst] =
        run_experiment("algebra-identities", {{"samples", "10000"}, {"tol", "1e-13"}});
    report(7, "algebraic property suite", ok, worst, now_ms() - t0);
}

void criterion_homotopy() {
    const double t0 = now_ms();
    auto [ok, worst] = run_experiment("homotopy-check", {{"tol", "1e-6"}});
    report(8, "homotopy invariance", ok, worst, now_ms() - t0);
}

void criterion_regions() {
    const double t0 = now_ms();
    auto [ok, worst] = run_experiment("region-classify", {{"pairs", "100"}});
    report(9, "region predicates", ok, worst, now_ms() - t0);
}

} // namespace

int main() {
    criterion_sphere_kernel();
    criterion_classical();
    criterion_deformed();
    criterion_regularized();
    criterion_restriction();
    criterion_regularity();
    criterion_algebra();
    criterion_homotopy();
    criterion_regions();
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures;
}
