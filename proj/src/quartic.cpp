#include "opcalc/quartic.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "opcalc/errors.hpp"
#include "opcalc/quadrature.hpp"

namespace opcalc {

namespace {

void check_model(const QuarticModel& m) {
    if (!(m.lambda > 0.0)) throw std::invalid_argument("quartic: lambda must be positive");
    if (!std::isfinite(m.a) || !std::isfinite(m.j))
        throw std::invalid_argument("quartic: parameters must be finite");
}

double log_integrand_exponent(const QuarticModel& m, double x) {
    return -m.a * x * x - m.lambda * x * x * x * x + m.j * x;
}

int argmin_abs(const std::vector<double>& v) {
    int best = 0;
    for (int i = 1; i < (int)v.size(); ++i)
        if (std::abs(v[size_t(i)]) < std::abs(v[size_t(best)])) best = i;
    return best;
}

void finish_report(SeriesReport& r) {
    r.abs_errors.clear();
    for (double s : r.partial_sums) r.abs_errors.push_back(std::abs(s - r.oracle));
    r.best_index = argmin_abs(r.abs_errors);
    r.min_term_index = argmin_abs(r.terms);
}

// sum_{n>=k} c_{2n} (2n)!/(2n-2k)! r0^(2n-2k), n running to M
double P_derivative_even(int k, double r0, int M) {
    if (M < k) throw std::invalid_argument("quartic: series depth must be at least the derivative order");
    if (r0 == 0.0) {
        // only the n = k term survives: c_{2k} (2k)! = Gamma((2k+1)/4)/2
        return 0.5 * std::exp(std::lgamma((2.0 * k + 1.0) / 4.0));
    }
    const double lr = std::log(std::abs(r0));
    double sum = 0.0, last = 0.0;
    for (int n = k; n <= M; ++n) {
        // log of Gamma((2n+1)/4)/(2 (2n-2k)!) * |r0|^(2n-2k); the power is
        // even so the sign of r0 never enters
        double lt = std::lgamma((2.0 * n + 1.0) / 4.0) - std::log(2.0)
                    - std::lgamma(2.0 * (n - k) + 1.0) + 2.0 * (n - k) * lr;
        last = std::exp(lt);
        sum += last;
    }
    if (last > 1e-12 * std::abs(sum))
        throw PSeriesUnderResolved("kernel derivative series not settled at depth " + std::to_string(M));
    return sum;
}

double hyp0f2(double b1, double b2, double u, int M, double& last_term) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < M; ++k) {
        term *= u / ((b1 + k) * (b2 + k) * (k + 1.0));
        sum += term;
    }
    last_term = term;
    return sum;
}

}  // namespace

double z_quadrature(const QuarticModel& m) {
    check_model(m);
    // walk the cutoff outward until the integrand is below double underflow
    double X = 1.0;
    while (log_integrand_exponent(m, X) > -740.0 || log_integrand_exponent(m, -X) > -740.0) {
        X *= 1.25;
        if (X > 1e6) throw std::runtime_error("quartic: integrand fails to decay");
    }
    auto f = [&](double x) { return std::exp(log_integrand_exponent(m, x)); };
    return quad_finite(f, -X, X, 0.0, 1e-13);
}

double P_coeff(int n) {
    if (n < 0) throw std::invalid_argument("quartic: coefficient index must be nonnegative");
    return std::exp(std::lgamma((2.0 * n + 1.0) / 4.0) - std::log(2.0) - std::lgamma(2.0 * n + 1.0));
}

double P_eval(double r, int M) {
    if (M < 4) throw std::invalid_argument("quartic: series depth too small");
    const double u = r * r * r * r / 256.0;
    const double g34 = std::tgamma(0.75);
    double last1 = 0.0, last2 = 0.0;
    const double f1 = hyp0f2(1.25, 1.5, u, M, last1);
    const double f2 = hyp0f2(0.5, 0.75, u, M, last2);
    const double block = g34 * g34 * r * r * f1 + 2.0 * std::sqrt(2.0) * M_PI * f2;
    if (std::abs(last1) * g34 * g34 * r * r > 1e-12 * std::abs(block) ||
        std::abs(last2) * 2.0 * std::sqrt(2.0) * M_PI > 1e-12 * std::abs(block))
        throw PSeriesUnderResolved("kernel series not settled at depth " + std::to_string(M));
    return block / (4.0 * g34);
}

SeriesReport weak_series(const QuarticModel& m, int K) {
    check_model(m);
    if (!(m.a > 0.0)) throw std::invalid_argument("quartic: weak expansion needs a > 0");
    if (K < 0 || K > 60) throw std::invalid_argument("quartic: weak order out of range [0,60]");

    // Each order applies the quartic derivative 4k times to the Gaussian
    // generating function sqrt(pi/a) exp((j+t)^2 / (4a)) and reads the value
    // at t = 0.  With h(t) = (j+t)^2/(4a) the derivatives D_n of exp(h)
    // satisfy D_n = h'(0) D_{n-1} + (n-1) h''(0) D_{n-2}, which stays in
    // double range where the naive (4k)! * coefficient split would not.
    const int top = 4 * K;
    const double h1 = m.j / (2.0 * m.a);
    const double h2 = 1.0 / (2.0 * m.a);
    std::vector<double> D(size_t(top) + 1, 0.0);
    D[0] = std::exp(m.j * m.j / (4.0 * m.a));
    if (top >= 1) D[1] = h1 * D[0];
    for (int n = 2; n <= top; ++n)
        D[size_t(n)] = h1 * D[size_t(n - 1)] + double(n - 1) * h2 * D[size_t(n - 2)];

    SeriesReport r;
    r.method = "qft-weak";
    r.model = m;
    const double pref = std::sqrt(M_PI / m.a);
    double lam_pow = 1.0;  // (-lambda)^k
    double fact_k = 1.0;   // k!
    double sum = 0.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) {
            lam_pow *= -m.lambda;
            fact_k *= double(k);
        }
        const double term = pref * lam_pow / fact_k * D[size_t(4 * k)];
        if (!std::isfinite(term)) throw std::runtime_error("quartic: weak term overflowed double range");
        sum += term;
        r.terms.push_back(term);
        r.partial_sums.push_back(sum);
    }
    r.oracle = z_quadrature(m);
    finish_report(r);
    return r;
}

SeriesReport strong_series(const QuarticModel& m, int K, int M) {
    check_model(m);
    if (K < 0 || K > 200) throw std::invalid_argument("quartic: strong order out of range [0,200]");
    const double q = std::pow(m.lambda, -0.25);
    const double r0 = m.j * q;

    SeriesReport r;
    r.method = "qft-strong";
    r.model = m;
    const double ratio = -m.a / std::sqrt(m.lambda);  // (-a) lambda^(-1/2)
    double pow_ratio = 1.0;
    double fact_k = 1.0;
    double sum = 0.0;
    for (int k = 0; k <= K; ++k) {
        if (k > 0) {
            pow_ratio *= ratio;
            fact_k *= double(k);
        }
        const double term = q * pow_ratio / fact_k * P_derivative_even(k, r0, M);
        sum += term;
        r.terms.push_back(term);
        r.partial_sums.push_back(sum);
    }
    r.oracle = z_quadrature(m);
    finish_report(r);
    return r;
}

}  // namespace opcalc
