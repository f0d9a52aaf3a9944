#pragma once

// The quartic-damped Gaussian integral
//     z(j) = integral of exp(-a x^2 - lambda x^4 + j x) dx
// and its two expansions:
//
//   weak:   series in lambda around the Gaussian (divergent asymptotic:
//           terms shrink, reach an interior minimum, then grow without
//           bound; the best partial sum has a finite accuracy floor),
//   strong: series in a around the pure quartic (convergent), built from
//           even derivatives of the entire kernel function
//               P(r) = sum_n  Gamma((2n+1)/4) / (2 (2n)!) * r^(2n).
//
// Both are reported against a direct quadrature oracle.

#include <string>
#include <vector>

namespace opcalc {

struct QuarticModel {
    double a = 1.0;
    double lambda = 1.0;
    double j = 0.0;
};

// adaptive quadrature of the defining integral (oracle)
double z_quadrature(const QuarticModel& m);

// Maclaurin coefficient of r^(2n) in P
double P_coeff(int n);

// P(r) summed through its confluent-hypergeometric block form:
//   P(r) = [Gamma(3/4)^2 r^2 0F2(5/4,3/2; r^4/256)
//           + 2 sqrt(2) pi 0F2(1/2,3/4; r^4/256)] / (4 Gamma(3/4))
// with M terms per block.  Throws PSeriesUnderResolved when the last kept
// term still exceeds 1e-12 of the running sum.
double P_eval(double r, int M = 64);

struct SeriesReport {
    std::string method;  // "qft-weak" or "qft-strong"
    QuarticModel model;
    std::vector<double> terms;
    std::vector<double> partial_sums;
    double oracle = 0.0;
    std::vector<double> abs_errors;  // |partial_sum - oracle|
    int best_index = 0;              // argmin of abs_errors
    int min_term_index = 0;          // argmin of |terms|
};

// orders 0..K of the expansion in lambda (a > 0 required)
SeriesReport weak_series(const QuarticModel& m, int K);

// orders 0..K of the expansion in a (lambda > 0 required); M terms feed
// each P derivative
SeriesReport strong_series(const QuarticModel& m, int K, int M = 64);

}  // namespace opcalc
