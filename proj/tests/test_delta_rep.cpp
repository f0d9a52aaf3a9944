#include <cmath>
#include <complex>
#include <vector>

#include "opcalc/delta_rep.hpp"
#include "opcalc/errors.hpp"
#include "opcalc/expr.hpp"
#include "opcalc/quadrature.hpp"
#include "test_framework.hpp"

using namespace opcalc;

namespace {

const double PI = 3.14159265358979323846;

double trunc_integral(const DeltaRepresentation& rep, int count,
                      const std::function<double(double)>& weight, double tol = 1e-11) {
    return quad_line([&](double x) { return truncated_delta(rep, x, count) * weight(x); }, tol,
                     tol);
}

void test_gaussian_coeffs() {
    DeltaRepresentation rep = preset_gaussian(1.0);
    REQUIRE(rep.op_coeffs.size() >= 5);
    CLOSE_C(rep.op_coeffs[0], cplx(1.0, 0.0), 1e-13);
    CLOSE_C(rep.op_coeffs[1], cplx(0.0, 0.0), 1e-13);
    CLOSE_C(rep.op_coeffs[2], cplx(-0.5, 0.0), 1e-13);
    CLOSE_C(rep.op_coeffs[3], cplx(0.0, 0.0), 1e-13);
    CLOSE_C(rep.op_coeffs[4], cplx(0.125, 0.0), 1e-13);

    DeltaRepresentation rep2 = preset_gaussian(0.4);
    CLOSE_C(rep2.op_coeffs[2], cplx(-0.2, 0.0), 1e-13);
}

void test_polynomial_generator_coeffs() {
    // generator 1 + x^2: reciprocal 1 - y^2 + y^4 - ..., and the symbol
    // substitution flips every other sign back
    Expression g = sum({constant(1.0), product({variable(), variable()})});
    DeltaRepresentation rep = build_representation(g, 8);
    const double want[5] = {1.0, 0.0, 1.0, 0.0, 1.0};
    for (int i = 0; i < 5; ++i)
        CLOSE_C(rep.op_coeffs[size_t(i)], cplx(want[i], 0.0), 1e-13);
}

void test_truncation_values() {
    // zeroth truncation is the classical Gaussian mollifier
    for (double sigma : {0.5, 1.0, 2.0}) {
        DeltaRepresentation rep = preset_gaussian(sigma);
        for (double x : {0.0, 0.3, -1.1})
            CLOSE(truncated_delta(rep, x, 0),
                  std::exp(-x * x / (2.0 * sigma)) / std::sqrt(2.0 * PI * sigma), 1e-12);
    }

    // one correction term at sigma = 1, x = 0: (2 pi)^{-1/2} * 3/2
    DeltaRepresentation rep = preset_gaussian(1.0);
    CLOSE(truncated_delta(rep, 0.0, 1), 1.5 / std::sqrt(2.0 * PI), 1e-12);
}

void test_unit_integrals() {
    DeltaRepresentation rep = preset_gaussian(1.0);
    for (int N : {0, 1, 2, 4})
        CLOSE(trunc_integral(rep, N, [](double) { return 1.0; }), 1.0, 1e-10);
}

void test_moments() {
    // integrating p against the truncation reproduces p(0) once the
    // truncation order covers the degree
    DeltaRepresentation rep = preset_gaussian(0.8);
    auto p = [](double x) { return 1.0 + 3.0 * x - 2.0 * x * x + 0.5 * x * x * x; };
    CLOSE(trunc_integral(rep, 2, p), 1.0, 1e-9);

    DeltaRepresentation pp = preset_poly_perturbed(0.3, 1.0);
    CLOSE(trunc_integral(pp, 2, p), 1.0, 1e-9);
}

void test_rational_preset() {
    // carrier falls back to quadrature; the mollifier property must survive
    DeltaRepresentation rep = preset_rational(0.4, 1.0);
    REQUIRE(!rep.carrier.has_value());
    CLOSE(trunc_integral(rep, 1, [](double) { return 1.0; }, 1e-7), 1.0, 1e-6);
}

void test_bad_generators() {
    // zero value at the origin leaves 1/g without a series
    Expression g = product({variable(), variable(), gauss_of(1.0, {1.0, 0.0})});
    REQUIRE_THROWS_AS(build_representation(g, 8), ZeroConstantTerm);
    REQUIRE_THROWS_AS(build_representation(sin_of({1.0, 0.0}), 8), ZeroConstantTerm);
}

}  // namespace

int main() {
    test_gaussian_coeffs();
    test_polynomial_generator_coeffs();
    test_truncation_values();
    test_unit_integrals();
    test_moments();
    test_rational_preset();
    test_bad_generators();
    return test_done("delta_rep");
}
