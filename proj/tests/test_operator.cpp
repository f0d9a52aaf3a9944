#include <cmath>
#include <complex>
#include <vector>

#include "opcalc/delta_rep.hpp"
#include "opcalc/errors.hpp"
#include "opcalc/expr.hpp"
#include "opcalc/operator_form.hpp"
#include "opcalc/power_series.hpp"
#include "test_framework.hpp"

using namespace opcalc;

namespace {

const double PI = 3.14159265358979323846;
const double SQRT2PI = std::sqrt(2.0 * PI);

cplx finite_at(const Expression& e, double x) { return evaluate(e, cplx(x, 0.0)).finite; }

Expression plane_wave(double w) { return exp_of({cplx(0.0, w), cplx(0.0, 0.0)}); }

// (2 pi s)^(-1/2) exp(-x^2 / (2 s))
Expression normal_density(double s) {
    return product({constant(1.0 / std::sqrt(2.0 * PI * s)), gauss_of(s, {1.0, 0.0})});
}

void test_lift_shift_terms() {
    // sin(y)/y lifts to (1/2)(e^{D} - e^{-D}) D^{-1}
    Expression f = product({sin_of({1.0, 0.0}), pv_of(1, {1.0, 0.0})});
    OperatorForm op = lift(f, Symbol::MinusID);
    REQUIRE(op.has_exact);
    REQUIRE(op.exact.size() == 2);
    for (const auto& t : op.exact) {
        REQUIRE(t.dinv == 1);
        REQUIRE(t.dpow == 0);
        REQUIRE(t.tau == 0.0);
        CLOSE(std::abs(t.shift.imag()), 0.0, 1e-14);
        if (t.shift.real() > 0) {
            CLOSE_C(t.shift, cplx(1.0, 0.0), 1e-14);
            CLOSE_C(t.coeff, cplx(0.5, 0.0), 1e-14);
        } else {
            CLOSE_C(t.shift, cplx(-1.0, 0.0), 1e-14);
            CLOSE_C(t.coeff, cplx(-0.5, 0.0), 1e-14);
        }
    }

    // plane wave lifts to a single real translation e^{w D}
    OperatorForm pw = lift(plane_wave(0.7), Symbol::MinusID);
    REQUIRE(pw.has_exact);
    REQUIRE(pw.exact.size() == 1);
    CLOSE_C(pw.exact[0].shift, cplx(0.7, 0.0), 1e-14);
    CLOSE_C(pw.exact[0].coeff, cplx(1.0, 0.0), 1e-14);

    // constant 1 lifts to the identity
    OperatorForm one = lift(constant(1.0), Symbol::MinusID);
    REQUIRE(one.has_exact);
    REQUIRE(one.exact.size() == 1);
    REQUIRE(one.exact[0].dpow == 0 && one.exact[0].dinv == 0);
    CLOSE_C(one.exact[0].shift, cplx(0.0, 0.0), 1e-14);
    CLOSE_C(one.exact[0].coeff, cplx(1.0, 0.0), 1e-14);

    REQUIRE_THROWS_AS(lift(theta_of({1.0, 0.0}), Symbol::MinusID), UnliftableExpression);
}

void test_apply_exact_shift_on_delta() {
    // e^{w d/dx} delta(x) = delta(x + w)
    const double w = 1.3;
    OperatorForm op = lift(plane_wave(w), Symbol::MinusID);
    Expression moved = apply_exact(op, delta_of(0, {1.0, 0.0}));
    DistributionalValue v = evaluate(moved, cplx(-w, 0.0));
    REQUIRE(v.has_on_point());
    REQUIRE(v.deltas.size() == 1);
    CLOSE_C(v.deltas[0].coeff, cplx(1.0, 0.0), 1e-13);
    // and nothing anywhere else
    REQUIRE(evaluate(moved, cplx(0.0, 0.0)).deltas.empty());
}

void test_heat_rule() {
    // e^{(1/2) D^2} on the normalized width-1 Gaussian gives the width-2 one
    Expression flowed = heat_flow(normal_density(1.0), 0.5);
    for (double x = -3.0; x <= 3.0; x += 0.5)
        CLOSE_C(finite_at(flowed, x), finite_at(normal_density(2.0), x), 1e-13);

    // contraction to the degenerate width recovers the delta exactly
    Expression collapsed = heat_flow(normal_density(1.0), -0.5);
    DistributionalValue v = evaluate(collapsed, cplx(0.0, 0.0));
    REQUIRE(v.deltas.size() == 1);
    REQUIRE(v.deltas[0].order == 0);
    CLOSE_C(v.deltas[0].coeff, cplx(1.0, 0.0), 1e-12);

    REQUIRE_THROWS_AS(heat_flow(normal_density(1.0), -0.6), HeatRuleViolation);

    // heat flow on a delta derivative produces the matching Gaussian derivative
    Expression d1 = heat_flow(delta_of(1, {1.0, 0.0}), 0.5);
    Expression ref = differentiate(normal_density(1.0));
    for (double x = -2.0; x <= 2.0; x += 0.4)
        CLOSE_C(finite_at(d1, x), finite_at(ref, x), 1e-13);

    // polynomial conjugation: e^{tau D^2} x^2 = x^2 + 2 tau
    Expression p2 = heat_flow(product({variable(), variable()}), 0.3);
    for (double x : {-1.0, 0.0, 2.0})
        CLOSE_C(finite_at(p2, x), cplx(x * x + 0.6, 0.0), 1e-13);

    // exponential eigenfactor: e^{tau D^2} e^{b x} = e^{tau b^2} e^{b x}
    Expression ex = heat_flow(exp_of({2.0, 0.0}), 0.25);
    CLOSE_C(finite_at(ex, 0.5), std::exp(0.25 * 4.0) * std::exp(1.0), 1e-12);
}

void test_inverse_derivative() {
    // bare D^{-1} on the delta is the Heaviside
    OperatorForm op;
    op.symbol = Symbol::PlusD;
    op.has_exact = true;
    op.exact.push_back({cplx(1.0, 0.0), cplx(0.0, 0.0), 0, 1, 0.0});
    Expression F = apply_exact(op, delta_of(0, {1.0, 0.0}));
    CLOSE_C(finite_at(F, 1.0), cplx(1.0, 0.0), 1e-14);
    CLOSE_C(finite_at(F, -1.0), cplx(0.0, 0.0), 1e-14);

    // upper-half-plane deltas are erased before antidifferentiation
    Expression gone = apply_exact(op, shift(delta_of(0, {1.0, 0.0}), cplx(0.0, 1.0)));
    REQUIRE(is_zero(gone) || std::abs(finite_at(gone, 0.7)) < 1e-15);
}

void test_shift_composition() {
    Expression e = sum({sin_of({1.0, 0.0}), product({variable(), variable()})});
    OperatorForm A = lift(plane_wave(0.4), Symbol::MinusID);
    OperatorForm B = lift(plane_wave(-1.1), Symbol::MinusID);
    OperatorForm AB = lift(plane_wave(-0.7), Symbol::MinusID);
    Expression two_step = apply_exact(A, apply_exact(B, e));
    Expression one_step = apply_exact(AB, e);
    for (double x = -2.0; x <= 2.0; x += 0.3)
        CLOSE_C(finite_at(two_step, x), finite_at(one_step, x), 1e-12);
}

void test_apply_truncated() {
    // truncated Gaussian-delta values: the reciprocal-series operator applied
    // to the transformed Gaussian carrier
    DeltaRepresentation rep = build_representation(gauss_of(1.0, {1.0, 0.0}), 16);
    OperatorForm op;
    op.fallback = ps_make(rep.op_coeffs);
    REQUIRE(rep.carrier.has_value());
    const Expression& carrier = *rep.carrier;

    const double n0 = apply_truncated(op, carrier, cplx(0.0, 0.0), 0).real() / SQRT2PI;
    CLOSE(n0, 1.0 / SQRT2PI, 1e-13);
    const double n1 = apply_truncated(op, carrier, cplx(0.0, 0.0), 2).real() / SQRT2PI;
    CLOSE(n1, 1.5 / SQRT2PI, 1e-13);

    // identity operator reproduces the operand value at any truncation order
    OperatorForm ident;
    std::vector<cplx> id_coeffs(10, cplx(0.0, 0.0));
    id_coeffs[0] = cplx(1.0, 0.0);
    ident.fallback = ps_make(id_coeffs);
    Expression s = sin_of({1.0, 0.0});
    for (int N : {0, 3, 9})
        CLOSE_C(apply_truncated(ident, s, cplx(0.7, 0.0), N), cplx(std::sin(0.7), 0.0), 1e-14);

    // asking for more terms than the series holds is an error, not a silent cap
    OperatorForm stub;
    stub.fallback = ps_make({cplx(1.0, 0.0)});
    REQUIRE_THROWS_AS(apply_truncated(stub, s, cplx(0.0, 0.0), 3), UnliftableExpression);
}

void test_exact_vs_truncated_agreement() {
    // cos lifts both exactly (two shifts) and as a series; on an entire
    // operand the truncated route approaches the exact one monotonically
    OperatorForm op = lift(cos_of({1.0, 0.0}), Symbol::MinusID, 24);
    REQUIRE(op.has_exact);
    REQUIRE(op.fallback.has_value());
    Expression operand = normal_density(4.0);
    const cplx exact = finite_at(apply_exact(op, operand), 0.3);
    double prev = 1e300;
    for (int N : {8, 12, 16, 20}) {
        const double err = std::abs(apply_truncated(op, operand, cplx(0.3, 0.0), N) - exact);
        REQUIRE(err <= prev + 1e-15);
        prev = err;
    }
    REQUIRE(prev < 1e-6);
}

void test_delta_of_derivative() {
    // plane wave: content sits at y = -w
    const double w = 0.7;
    DistributionalValue v = apply_delta_of_derivative(cplx(-w, 0.0), plane_wave(w));
    REQUIRE(v.deltas.size() == 1);
    REQUIRE(v.deltas[0].order == 0);
    CLOSE_C(v.deltas[0].location, cplx(0.0, 0.0), 1e-14);
    CLOSE_C(v.deltas[0].coeff, cplx(1.0, 0.0), 1e-14);

    // constant: content at y = 0
    DistributionalValue c = apply_delta_of_derivative(cplx(0.0, 0.0), constant(1.0));
    REQUIRE(c.deltas.size() == 1);
    CLOSE_C(c.deltas[0].location, cplx(0.0, 0.0), 1e-14);
    CLOSE_C(c.deltas[0].coeff, cplx(1.0, 0.0), 1e-14);

    // sin: two content entries with coefficients +-1/(2i)
    DistributionalValue s = apply_delta_of_derivative(cplx(0.0, 0.0), sin_of({1.0, 0.0}));
    REQUIRE(s.deltas.size() == 2);
    for (const auto& t : s.deltas) {
        REQUIRE(t.order == 0);
        if (t.location.real() > 0)  // argument y + 1, the delta at y = -1
            CLOSE_C(t.coeff, cplx(0.0, -0.5), 1e-14);
        else
            CLOSE_C(t.coeff, cplx(0.0, 0.5), 1e-14);
    }

    // polynomial factor raises the derivative order: x e^{i c x}
    DistributionalValue p =
        apply_delta_of_derivative(cplx(0.0, 0.0), product({variable(), plane_wave(2.0)}));
    REQUIRE(p.deltas.size() == 1);
    REQUIRE(p.deltas[0].order == 1);
    CLOSE_C(p.deltas[0].location, cplx(2.0, 0.0), 1e-14);
    CLOSE_C(p.deltas[0].coeff, cplx(0.0, -1.0), 1e-14);

    REQUIRE_THROWS_AS(apply_delta_of_derivative(cplx(0.0, 0.0), gauss_of(1.0, {1.0, 0.0})),
                      NotExponentialPolynomial);
}

void test_regularized_deldel() {
    // delta_sigma(-i d/dx) applied to delta_tau(x) at 0 equals
    // (2 pi)^{-1} (1 + sigma tau)^{-1/2}
    auto deldel = [](double sg, double tu) {
        Expression dsg =
            product({constant(1.0 / std::sqrt(2.0 * PI * sg)), gauss_of(sg, {1.0, 0.0})});
        OperatorForm op = lift(dsg, Symbol::MinusID);
        REQUIRE(op.has_exact);
        Expression dtu =
            product({constant(1.0 / std::sqrt(2.0 * PI * tu)), gauss_of(tu, {1.0, 0.0})});
        return finite_at(apply_exact(op, dtu), 0.0).real();
    };
    CLOSE(deldel(0.1, 0.1), 1.0 / (2.0 * PI) / std::sqrt(1.0 + 0.01), 1e-12);
    CLOSE(deldel(0.3, 0.05), 1.0 / (2.0 * PI) / std::sqrt(1.0 + 0.015), 1e-12);
    // limit toward the bare identity value 1/(2 pi)
    CLOSE(deldel(1e-5, 1e-5), 1.0 / (2.0 * PI), 1e-9);
}

void test_atom_decomposition() {
    // x^2 cos(x) exp(-x^2) splits into two conjugate Gaussian-exponential atoms
    Expression f = product({variable(), variable(), cos_of({1.0, 0.0}), gauss_of(0.5, {1.0, 0.0})});
    std::vector<Atom> atoms = decompose_atoms(f);
    REQUIRE(atoms.size() == 2);
    for (const auto& a : atoms) {
        REQUIRE(a.p == 2);
        REQUIRE(a.m == 0);
        CLOSE(a.q, -1.0, 1e-14);
        CLOSE(std::abs(a.b.imag()), 1.0, 1e-14);
        CLOSE_C(a.coeff, cplx(0.5, 0.0), 1e-14);
    }
}

}  // namespace

int main() {
    test_lift_shift_terms();
    test_apply_exact_shift_on_delta();
    test_heat_rule();
    test_inverse_derivative();
    test_shift_composition();
    test_apply_truncated();
    test_exact_vs_truncated_agreement();
    test_delta_of_derivative();
    test_regularized_deldel();
    test_atom_decomposition();
    return test_done("operator");
}
