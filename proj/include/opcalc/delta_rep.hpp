#pragma once

// Approximate representations of the delta distribution generated by an
// invertible even profile g:
//
//   delta(x) = (2 pi)^(-1/2) * [1/g](-i d/dx) applied to gt(x),
//
// where gt is the Fourier transform of g.  Truncating the operator series
// after a finite number of terms gives smooth approximants whose low
// moments match the delta exactly.

#include <functional>
#include <optional>

#include "opcalc/expr.hpp"
#include "opcalc/power_series.hpp"

namespace opcalc {

struct DeltaRepresentation {
    Expression generator;
    std::vector<cplx> op_coeffs;        // d_n: coefficient of D^n in [1/g](-iD)
    std::optional<Expression> carrier;  // closed form of gt when available
    std::function<cplx(double, int)> carrier_deriv;  // k-th derivative of gt at x
    int max_order = 0;
};

// Builds the representation for a generator with g-series constant term
// nonzero (throws ZeroConstantTerm otherwise).  When the generator lies in
// the exponential-polynomial-Gaussian class the carrier is closed form;
// otherwise carrier values come from direct quadrature of the transform.
DeltaRepresentation build_representation(const Expression& g, int order = 16);

// Partial sum of the first (count+1) nonzero operator terms applied to the
// carrier, evaluated at x.  A real value; the imaginary dust is checked
// to stay below 1e-10 of the magnitude.
double truncated_delta(const DeltaRepresentation& rep, double x, int count);

// ready-made generators
DeltaRepresentation preset_gaussian(double sigma, int order = 16);
DeltaRepresentation preset_poly_perturbed(double beta, double sigma, int order = 16);
DeltaRepresentation preset_rational(double beta, double sigma, int order = 16);

}  // namespace opcalc
