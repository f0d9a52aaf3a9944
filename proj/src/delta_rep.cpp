#include "opcalc/delta_rep.hpp"

#include <cmath>

#include "opcalc/quadrature.hpp"
#include "opcalc/transforms.hpp"

namespace opcalc {

namespace {

const cplx I{0.0, 1.0};

cplx unit_ipow(int k) {
    int r = ((k % 4) + 4) % 4;
    switch (r) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace

DeltaRepresentation build_representation(const Expression& g, int order) {
    DeltaRepresentation rep;
    rep.generator = g;
    rep.max_order = order;

    PowerSeries recip = ps_reciprocal(series_of(g, order));
    rep.op_coeffs.resize(recip.c.size());
    for (std::size_t n = 0; n < recip.c.size(); ++n)
        rep.op_coeffs[n] = recip.c[n] * unit_ipow(-int(n));

    try {
        TransformResult ft = fourier_via_delta(g, 0.0);
        rep.carrier = ft.closed_form;
        Expression carrier = *ft.closed_form;
        rep.carrier_deriv = [carrier](double x, int k) {
            std::vector<cplx> j = jet(carrier, cplx(x, 0.0), k);
            double fact = 1.0;
            for (int i = 2; i <= k; ++i) fact *= double(i);
            return j[std::size_t(k)] * fact;
        };
    } catch (const EngineError&) {
        // no closed transform: take derivatives under the integral sign,
        //   gt^(k)(x) = (2 pi)^(-1/2) * integral of g(t) (i t)^k e^(i t x) dt
        Expression gen = g;
        rep.carrier_deriv = [gen](double x, int k) {
            RealFn integrand = [&gen, x, k](double t) {
                double gv = evaluate(gen, cplx(t, 0.0)).finite.real();
                double tk = std::pow(t, k);
                switch (((k % 4) + 4) % 4) {
                    case 0: return gv * tk * std::cos(t * x);
                    case 1: return -gv * tk * std::sin(t * x);
                    case 2: return -gv * tk * std::cos(t * x);
                    default: return gv * tk * std::sin(t * x);
                }
            };
            double v = quad_line(integrand, 1e-13, 1e-13) / std::sqrt(2.0 * M_PI);
            return cplx(v, 0.0);
        };
    }
    return rep;
}

double truncated_delta(const DeltaRepresentation& rep, double x, int count) {
    if (count < 0) throw std::invalid_argument("count must be >= 0");
    // locate the first (count+1) nonzero operator coefficients
    std::vector<int> orders;
    for (int n = 0; n < int(rep.op_coeffs.size()) && int(orders.size()) <= count; ++n)
        if (std::abs(rep.op_coeffs[std::size_t(n)]) > 1e-300) orders.push_back(n);
    if (int(orders.size()) <= count)
        throw std::invalid_argument(
            "operator series holds fewer nonzero terms than requested");

    cplx acc{0.0, 0.0};
    if (rep.carrier) {
        std::vector<cplx> j = jet(*rep.carrier, cplx(x, 0.0), orders.back());
        double fact = 1.0;
        std::vector<double> facts(std::size_t(orders.back()) + 1, 1.0);
        for (int n = 1; n <= orders.back(); ++n) {
            fact *= double(n);
            facts[std::size_t(n)] = fact;
        }
        for (int n : orders)
            acc += rep.op_coeffs[std::size_t(n)] * j[std::size_t(n)] * facts[std::size_t(n)];
    } else {
        for (int n : orders)
            acc += rep.op_coeffs[std::size_t(n)] * rep.carrier_deriv(x, n);
    }
    acc /= std::sqrt(2.0 * M_PI);
    if (std::abs(acc.imag()) > 1e-10 * (1.0 + std::abs(acc)))
        throw std::runtime_error("truncated delta value came out non-real");
    return acc.real();
}

DeltaRepresentation preset_gaussian(double sigma, int order) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    // e^(-sigma x^2 / 2)
    return build_representation(
        gauss_of(1.0 / sigma, Affine{{1.0, 0.0}, {0.0, 0.0}}), order);
}

DeltaRepresentation preset_poly_perturbed(double beta, double sigma, int order) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    Expression poly = sum({constant(1.0), product({constant(beta), powi(variable(), 2)})});
    Expression g =
        product({poly, gauss_of(1.0 / sigma, Affine{{1.0, 0.0}, {0.0, 0.0}})});
    return build_representation(g, order);
}

DeltaRepresentation preset_rational(double beta, double sigma, int order) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    Expression poly = sum({constant(1.0), product({constant(beta), powi(variable(), 2)})});
    Expression g = product({gauss_of(1.0 / sigma, Affine{{1.0, 0.0}, {0.0, 0.0}}),
                            powi(poly, -1)});
    return build_representation(g, order);
}

}  // namespace opcalc
