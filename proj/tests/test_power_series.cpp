#include <cmath>
#include <complex>
#include <vector>

#include "opcalc/errors.hpp"
#include "opcalc/expr.hpp"
#include "opcalc/power_series.hpp"
#include "test_framework.hpp"

using namespace opcalc;

namespace {

PowerSeries from_reals(std::vector<double> v) {
    std::vector<cplx> c(v.begin(), v.end());
    return ps_make(std::move(c));
}

void coeffs_close(const PowerSeries& got, const std::vector<double>& want, double tol = 1e-13) {
    REQUIRE(got.c.size() >= want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        requireCloseC(got.c[i], cplx(want[i], 0.0), tol, __FILE__, __LINE__, "coeff");
}

void test_arith() {
    PowerSeries a = from_reals({1.0, 1.0, 0.0});
    PowerSeries b = from_reals({1.0, -1.0, 0.0});
    coeffs_close(ps_mul(a, b), {1.0, 0.0, -1.0});

    PowerSeries s = from_reals({0.25, -2.0, 3.5});
    PowerSeries z = ps_add(s, ps_scale(s, cplx(-1.0, 0.0)));
    coeffs_close(z, {0.0, 0.0, 0.0});

    // truncation order is the min of the operands
    PowerSeries s4 = from_reals({1.0, 2.0, 3.0, 4.0, 5.0});
    REQUIRE(ps_mul(s, s4).order() == 2);
    REQUIRE(ps_add(s, s4).order() == 2);
}

void test_compose() {
    // exp series composed with 2x: 1 + 2x + 2x^2 + (4/3)x^3
    PowerSeries e = from_reals({1.0, 1.0, 0.5, 1.0 / 6.0});
    PowerSeries g = from_reals({0.0, 2.0, 0.0, 0.0});
    coeffs_close(ps_compose(e, g), {1.0, 2.0, 2.0, 4.0 / 3.0});

    REQUIRE_THROWS_AS(ps_compose(e, from_reals({0.5, 1.0, 0.0, 0.0})), ComposeNonzeroConstant);
}

void test_reciprocal() {
    coeffs_close(ps_reciprocal(from_reals({1.0, -1.0, 0.0, 0.0})), {1.0, 1.0, 1.0, 1.0});
    coeffs_close(ps_reciprocal(from_reals({2.0})), {0.5});
    REQUIRE_THROWS_AS(ps_reciprocal(from_reals({0.0, 1.0})), ZeroConstantTerm);

    // reciprocal of the x^2/2-Gaussian exponential series is the +x^2/2 one
    PowerSeries down = series_of(gauss_of(1.0, {1.0, 0.0}), 8);
    PowerSeries up = ps_reciprocal(down);
    coeffs_close(up, {1.0, 0.0, 0.5, 0.0, 0.125, 0.0, 1.0 / 48.0}, 1e-12);

    // reciprocal is an involution up to the truncation order
    PowerSeries a = from_reals({1.5, 0.25, -0.75, 0.125, 2.0});
    PowerSeries back = ps_reciprocal(ps_reciprocal(a));
    for (int i = 0; i <= a.order(); ++i)
        requireCloseC(back.coeff(i), a.coeff(i), 1e-12, __FILE__, __LINE__, "involution");
}

void test_mul_associative() {
    PowerSeries a = from_reals({1.0, 2.0, -1.0, 0.5});
    PowerSeries b = from_reals({-0.5, 1.0, 3.0, 0.0});
    PowerSeries c = from_reals({2.0, 0.0, 1.0, -1.0});
    PowerSeries l = ps_mul(ps_mul(a, b), c);
    PowerSeries r = ps_mul(a, ps_mul(b, c));
    for (int i = 0; i <= l.order(); ++i)
        requireCloseC(l.coeff(i), r.coeff(i), 1e-13, __FILE__, __LINE__, "assoc");
}

void test_series_of() {
    coeffs_close(series_of(cos_of({1.0, 0.0}), 4), {1.0, 0.0, -0.5, 0.0, 1.0 / 24.0});
    coeffs_close(series_of(gauss_of(1.0, {1.0, 0.0}), 4), {1.0, 0.0, -0.5, 0.0, 0.125});
    REQUIRE_THROWS_AS(series_of(theta_of({1.0, 0.0}), 3), NotSmoothAtOrigin);

    // series_of commutes with differentiation
    Expression f = product({variable(), cos_of({2.0, 0.0})});
    PowerSeries sd = series_of(differentiate(f), 5);
    PowerSeries s = series_of(f, 6);
    for (int i = 0; i <= 5; ++i)
        requireCloseC(sd.coeff(i), cplx(double(i + 1), 0.0) * s.coeff(i + 1), 1e-12, __FILE__,
                      __LINE__, "formal derivative");
}

void test_eval() {
    PowerSeries e = series_of(exp_of({1.0, 0.0}), 20);
    requireCloseC(ps_eval(e, cplx(0.5, 0.0)), cplx(std::exp(0.5), 0.0), 1e-12, __FILE__, __LINE__,
                  "exp eval");
}

}  // namespace

int main() {
    test_arith();
    test_compose();
    test_reciprocal();
    test_mul_associative();
    test_series_of();
    test_eval();
    return test_done("power_series");
}
