#pragma once

// Thin adaptive-quadrature wrappers (independent numeric oracles for the
// symbolic results).  All functions throw std::runtime_error on integrator
// failure.

#include <functional>

namespace opcalc {

using RealFn = std::function<double(double)>;

// integral over the whole line (adaptive, transformed to a finite interval)
double quad_line(const RealFn& f, double epsabs = 1e-12, double epsrel = 1e-12);

// integral over [a, oo)
double quad_upper(const RealFn& f, double a, double epsabs = 1e-12,
                  double epsrel = 1e-12);

// integral over [a, b]
double quad_finite(const RealFn& f, double a, double b, double epsabs = 1e-13,
                   double epsrel = 1e-13);

// integral over [a, oo) of f(x) * sin(omega x) resp. f(x) * cos(omega x)
// via the Fourier-type accelerated routine
double quad_fourier_sin(const RealFn& f, double a, double omega,
                        double epsabs = 1e-12);
double quad_fourier_cos(const RealFn& f, double a, double omega,
                        double epsabs = 1e-12);

}  // namespace opcalc
