#pragma once

// Closed symbolic expression family over one real variable x:
//
//   constants (complex), affine maps a*x+c, sums, products, integer powers,
//   exp / sin / cos / log / log|.| of affine arguments,
//   Gaussians exp(-(x+c)^2 / (2 s)) with width s > 0,
//   step functions theta(x+c), derivatives of the delta distribution
//   delta^(n)(x+c), and principal-value powers pp(1/(x+c)^k).
//
// The family is closed under differentiation and shifting, and (for the
// documented subfamily) under antidifferentiation.  Distributional
// primitives keep a unit slope in their argument: factories normalise
// theta(a x + c), delta^(n)(a x + c) and pp(1/(a x+c)^k) with real a != 0
// into unit-slope form using the parity and scaling laws, and reject
// non-real slopes.
//
// Delta convention on complex arguments: delta^(n)(z) is identically zero
// for Im z > 0 and undefined for Im z < 0.  evaluate() implements this and
// erase_upper_half_deltas() applies the "zero" half structurally.

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opcalc/errors.hpp"

namespace opcalc {

using cplx = std::complex<double>;

// argument of a primitive: alpha*x + c
struct Affine {
    cplx alpha{1.0, 0.0};
    cplx c{0.0, 0.0};
    cplx at(cplx x) const { return alpha * x + c; }
};

enum class Kind {
    Const,
    Lin,     // alpha*x + c as an expression
    Sum,
    Prod,
    Pow,     // kids[0] ^ n, integer n
    Exp,
    Sin,
    Cos,
    Log,     // principal branch
    LogAbs,  // log |arg|; the distributional antiderivative of pp(1/u)
    Gauss,   // exp(-(x+c)^2/(2 width)), width > 0 (slope normalised to 1)
    Theta,
    Delta,   // n-th derivative of delta, n >= 0
    PV,      // principal value of 1/(x+c)^n, n >= 1
};

struct Node;

class Expression {
public:
    Expression();  // zero
    explicit Expression(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
    const Node& node() const { return *p_; }

private:
    std::shared_ptr<const Node> p_;
};

struct Node {
    Kind kind = Kind::Const;
    cplx cval{0.0, 0.0};          // Const
    Affine arg{};                 // all primitive kinds
    double width = 0.0;           // Gauss
    int n = 0;                    // Pow exponent / Delta order / PV power
    std::vector<Expression> kids; // Sum, Prod, Pow
};

// ---- factories (with light normalisation / constant folding) ----
Expression constant(cplx v);
Expression constant(double v);
Expression variable();                       // x
Expression linear(cplx alpha, cplx c);       // alpha*x + c
Expression sum(std::vector<Expression> parts);
Expression product(std::vector<Expression> parts);
Expression powi(const Expression& base, int k);
Expression exp_of(Affine a);
Expression sin_of(Affine a);
Expression cos_of(Affine a);
Expression log_of(Affine a);
Expression logabs_of(Affine a);
Expression gauss_of(double width, Affine a);
Expression theta_of(Affine a);
Expression delta_of(int order, Affine a);
Expression pv_of(int k, Affine a);

// ---- distributional values ----
struct DeltaTerm {
    cplx location;  // value of the delta's argument at the evaluation point
    int order = 0;  // derivative order of the delta
    cplx coeff{1.0, 0.0};
};

struct DistributionalValue {
    cplx finite{0.0, 0.0};
    std::vector<DeltaTerm> deltas;  // only terms sitting on the point survive
    bool has_on_point(double tol = 1e-12) const;
};

// ---- operations ----
Expression differentiate(const Expression& e, int times = 1);
Expression shift(const Expression& e, cplx w);  // x -> x + w
Expression antiderivative(const Expression& e); // throws NoClosedForm outside subfamily
DistributionalValue evaluate(const Expression& e, cplx x0);

// Taylor coefficients f^(k)(x0)/k!, k = 0..order.  Throws NotSmoothAtOrigin
// on the singular support of theta/delta, PoleAtPoint on poles.
std::vector<cplx> jet(const Expression& e, cplx x0, int order);

// Coefficients in x if the expression is a (complex) polynomial.
std::optional<std::vector<cplx>> poly_coeffs(const Expression& e);

// Structurally replaces delta^(n)(x+c) with Im c > 0 by zero (they vanish
// identically under the convention above).  Deltas with Im c < 0 throw.
Expression erase_upper_half_deltas(const Expression& e);

bool is_zero(const Expression& e);
std::string to_string(const Expression& e);
std::string format_complex(cplx v);

}  // namespace opcalc
