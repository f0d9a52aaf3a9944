#pragma once

// Turning expressions f(x) into derivative operators f(S) for a symbol
// S in {-i d/dx, +i d/dx, d/dx} and applying them to expressions.
//
// The exact route decomposes f into atoms
//     coeff * x^p * exp(b x) * exp(q x^2) * x^(-m)        (q <= 0 real)
// and maps each atom to an operator term
//     coeff' * e^(c D) D^k D^(-m) e^(tau D^2)
// using the substitution rules for the chosen symbol: powers of the symbol
// become derivative powers, exp(b u) becomes a translation e^(c D) acting as
// x -> x + c on the operand, and exp(q u^2) becomes heat flow e^(tau D^2).
// A truncated-series fallback (coefficients of D^n) is kept alongside
// whenever f has a Maclaurin expansion.

#include <optional>
#include <vector>

#include "opcalc/expr.hpp"
#include "opcalc/power_series.hpp"

namespace opcalc {

enum class Symbol {
    MinusID,  // S = -i d/dx
    PlusID,   // S = +i d/dx
    PlusD,    // S = d/dx
};

struct Atom {
    cplx coeff{1.0, 0.0};
    int p = 0;       // power of x
    cplx b{0.0, 0.0}; // exp(b x)
    double q = 0.0;   // exp(q x^2), q <= 0
    int m = 0;        // power of 1/x
};

// Exact exponential-polynomial-Gaussian decomposition; throws
// UnliftableExpression when the expression leaves that class.
std::vector<Atom> decompose_atoms(const Expression& f);

struct OperatorTerm {
    cplx coeff{1.0, 0.0};
    cplx shift{0.0, 0.0};  // translation x -> x + shift
    int dpow = 0;          // D^dpow
    int dinv = 0;          // D^-dinv (antidifferentiation)
    double tau = 0.0;      // e^(tau D^2)
};

struct OperatorForm {
    Symbol symbol = Symbol::MinusID;
    std::vector<OperatorTerm> exact;
    bool has_exact = false;
    std::optional<PowerSeries> fallback;  // coefficients of D^n
};

// Builds the operator form of f at the given symbol.  At least one of the
// two routes must succeed, otherwise UnliftableExpression is thrown.
OperatorForm lift(const Expression& f, Symbol s, int series_order = 16);

// Heat flow e^(tau D^2) on an expression.  Exact rules:
//   on delta derivatives (tau > 0): Gaussian of variance 2 tau;
//   on (polynomial x Gaussian x exponential): variance shift s -> s + 2 tau,
//   degenerating to a delta at s + 2 tau = 0 and failing below;
//   on exponentials/trig: eigenvalue factor e^(tau alpha^2);
//   on polynomials: finite expansion.
Expression heat_flow(const Expression& e, double tau);

// Applies the exact operator terms to an expression.  Requires has_exact.
Expression apply_exact(const OperatorForm& op, const Expression& e);

// Applies the truncated series sum_{n<=N} c_n D^n to e at the point x0.
cplx apply_truncated(const OperatorForm& op, const Expression& e, cplx x0, int N);

// Applies delta(i d/dx - y) to a finite combination of polynomials times
// exponentials.  The eigenvalue rule turns each atom a x^p e^(b x) into
// a (-i)^p delta^(p) at argument (y - i b) -- for a plane wave e^(i w x)
// that is (y + w); the x-dependent phases cancel against e^(i x y)
// identically, so the returned delta content in y is probe independent.
// Throws NotExponentialPolynomial otherwise.
DistributionalValue apply_delta_of_derivative(cplx y, const Expression& e);

}  // namespace opcalc
