#pragma once

// High-level transforms built from operator application to delta kernels.
//
// method tags used in results (and by the CLI):
//   "fou1"           Fourier transform via the heated delta
//   "fourier2"       Fourier transform via the shifted delta of a derivative
//   "int1"           whole-line integral via operator on delta at 0
//   "int2"           whole-line integral via Gaussian-regularized evaluation
//   "halfline"       integral over [a, oo)
//   "laplace"        integral of f(x) e^(-a x) over [0, oo)
//   "interval"       integral over [a, b]
//   "antiderivative" antiderivative value F(x) with F(0) = 0
//
// Normalisation: the Fourier transform of g is
//   gt(y) = (2 pi)^(-1/2) * integral of g(x) e^(i x y) dx.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opcalc/expr.hpp"
#include "opcalc/operator_form.hpp"

namespace opcalc {

struct TransformResult {
    std::string method;
    std::optional<Expression> closed_form;
    std::optional<DistributionalValue> distribution;
    std::optional<cplx> scalar;
    std::vector<std::pair<std::string, double>> diagnostics;
};

// Fourier transform as an expression in the result variable.  sigma = 0 uses
// the bare delta kernel; sigma > 0 runs the same computation through the
// Gaussian-regularized delta (the regularization cancels identically for
// every admissible input, which the tests verify).
TransformResult fourier_via_delta(const Expression& g, double sigma = 0.0);

// Fourier transform of an exponential-polynomial as delta content in the
// result variable, evaluated at y.  The probe point x_probe is recorded in
// the diagnostics; the result is probe independent because the probe phases
// cancel identically.
TransformResult fourier_via_shifted_delta(const Expression& g, cplx y,
                                          double x_probe = 0.0);

// integral of f over the whole line (operator route).
TransformResult integrate_line(const Expression& f);

// integral of f over the whole line (Gaussian damped route).  Computes the
// analytic sigma -> 0 limit and attaches damped values at sigma = 0.1, 0.05,
// 0.025 as diagnostics.
TransformResult integrate_line_regularized(const Expression& f, double sigma = 0.0);

// integral of f over [a, oo).
TransformResult integrate_halfline(const Expression& f, double a = 0.0);

// integral of f(x) e^(-a x) over [0, oo), a > 0.
TransformResult laplace_transform(const Expression& f, double a);

// integral of f over [a, b].
TransformResult integrate_interval(const Expression& f, double a, double b);

// F(x) with F' = f and F(0) = 0, evaluated at x.
TransformResult antiderivative_value(const Expression& f, double x);

}  // namespace opcalc
