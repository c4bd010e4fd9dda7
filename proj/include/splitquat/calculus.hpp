#ifndef SPLITQUAT_CALCULUS_HPP
#define SPLITQUAT_CALCULUS_HPP

#include <array>
#include <functional>
#include <vector>

#include "splitquat/biquaternion.hpp"

namespace sq {

enum class DiracOp { nabla, nabla_plus };
enum class Side { left, right };
/// Coordinate form the derivative is taken in.  `holomorphic` differentiates
/// in the complex coordinates z0..z3; the Minkowski form is exposed through
/// the same route (all variants coincide on holomorphic functions).
enum class DiracForm { H, HR, M, holomorphic };

struct DiracSpec {
    DiracOp op = DiracOp::nabla_plus;
    Side side = Side::left;
    DiracForm form = DiracForm::HR;
};

enum class FuncKind { Constant, Linear, Kernel, ReciprocalN, Polynomial, Custom };

/// Evaluatable function HC -> HC with optional closed-form Dirac derivatives.
struct QFunction {
    FuncKind kind = FuncKind::Custom;
    std::function<Biquaternion(const Biquaternion&)> eval;
    Biquaternion center; // Kernel / ReciprocalN pole location
    std::function<Biquaternion(const DiracSpec&, const Biquaternion&)> exact_dirac;

    Biquaternion operator()(const Biquaternion& z) const { return eval(z); }
    bool has_exact() const { return static_cast<bool>(exact_dirac); }

    static QFunction constant(const Biquaternion& c);
    /// (Z - Z0)^{-1} / N(Z - Z0), the two-sided regular Cauchy-Fueter kernel.
    static QFunction kernel(const Biquaternion& z0);
    /// Scalar 1/N(Z - Z0) times e0.
    static QFunction reciprocal_n(const Biquaternion& z0);
    /// Monomial sum: each term coeff * z0^a z1^b z2^c z3^d with exact derivatives.
    struct Monomial {
        std::array<int, 4> powers{0, 0, 0, 0};
        Biquaternion coeff;
    };
    static QFunction polynomial(std::vector<Monomial> terms);
    static QFunction custom(std::function<Biquaternion(const Biquaternion&)> f);
};

/// The operator's coefficient units (with signs) and the differentiation
/// directions for a given (op, form).
struct DiracCoefficients {
    std::array<Biquaternion, 4> units;      // multiplied on the chosen side
    std::array<Biquaternion, 4> directions; // FD step directions
};
DiracCoefficients dirac_coefficients(DiracOp op, DiracForm form);

/// Central-difference (h > 0) or closed-form (h == 0) Dirac derivative.
Biquaternion apply_dirac(const DiracSpec& spec, const QFunction& f,
                         const Biquaternion& x, double h);

/// euclid_norm of the nabla_plus application; vanishes to O(h^2) iff f is
/// regular at x on the given side.
double regularity_residual(const QFunction& f, const Biquaternion& x,
                           DiracForm form, Side side, double h);

/// || box_{2,2} f - nabla_R(nabla_plus_R f) || at x, both by finite differences.
double wave_residual(const QFunction& f, const Biquaternion& x, double h);

/// Direct second-difference evaluation of the ultrahyperbolic operator.
Biquaternion apply_wave_operator(const QFunction& f, const Biquaternion& x, double h);

struct ChainRuleReport {
    double residual_plus_of_conj;  // nabla(F(Z^+)) vs (nabla_plus F)(Z^+)
    double residual_conj_of_plus;  // nabla_plus(F(Z^+)) vs (nabla F)(Z^+)
    double residual_inverse;       // nabla(F(Z^{-1})) vs -Z^{-1} (nabla F)(Z^{-1}) Z^{-1}
};
ChainRuleReport verify_chain_rules(const QFunction& f, const Biquaternion& z, double h);

} // namespace sq

#endif
