#include "opcalc/power_series.hpp"

#include <algorithm>
#include <cmath>

namespace opcalc {

PowerSeries ps_make(std::vector<cplx> coeffs) {
    if (coeffs.empty()) coeffs.push_back({0.0, 0.0});
    return PowerSeries{std::move(coeffs)};
}

PowerSeries ps_zero(int order) {
    return PowerSeries{std::vector<cplx>(std::size_t(order) + 1, cplx(0.0, 0.0))};
}

namespace {
std::size_t joint_len(const PowerSeries& a, const PowerSeries& b) {
    return std::min(a.c.size(), b.c.size());
}
}  // namespace

PowerSeries ps_add(const PowerSeries& a, const PowerSeries& b) {
    std::size_t len = joint_len(a, b);
    PowerSeries r = ps_zero(int(len) - 1);
    for (std::size_t k = 0; k < len; ++k) r.c[k] = a.c[k] + b.c[k];
    return r;
}

PowerSeries ps_sub(const PowerSeries& a, const PowerSeries& b) {
    std::size_t len = joint_len(a, b);
    PowerSeries r = ps_zero(int(len) - 1);
    for (std::size_t k = 0; k < len; ++k) r.c[k] = a.c[k] - b.c[k];
    return r;
}

PowerSeries ps_mul(const PowerSeries& a, const PowerSeries& b) {
    std::size_t len = joint_len(a, b);
    PowerSeries r = ps_zero(int(len) - 1);
    for (std::size_t i = 0; i < len; ++i) {
        if (a.c[i] == cplx(0.0, 0.0)) continue;
        for (std::size_t j = 0; i + j < len; ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

PowerSeries ps_scale(const PowerSeries& a, cplx s) {
    PowerSeries r = a;
    for (auto& v : r.c) v *= s;
    return r;
}

PowerSeries ps_compose(const PowerSeries& f, const PowerSeries& g) {
    if (std::abs(g.coeff(0)) > 1e-12)
        throw ComposeNonzeroConstant("inner series has constant term " +
                                     format_complex(g.coeff(0)));
    std::size_t len = joint_len(f, g);
    PowerSeries gz = ps_zero(int(len) - 1);
    for (std::size_t k = 1; k < len; ++k) gz.c[k] = g.c[k];
    // Horner over truncations: r = f[n] ; r = r*g + f[k]
    PowerSeries r = ps_zero(int(len) - 1);
    for (std::size_t k = len; k-- > 0;) {
        r = ps_mul(r, gz);
        r.c[0] += f.c[k];
    }
    return r;
}

PowerSeries ps_reciprocal(const PowerSeries& a) {
    if (std::abs(a.coeff(0)) < 1e-300)
        throw ZeroConstantTerm("reciprocal of a series with zero constant term");
    PowerSeries r = ps_zero(a.order());
    r.c[0] = 1.0 / a.c[0];
    for (std::size_t n = 1; n < a.c.size(); ++n) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 1; k <= n; ++k) acc += a.c[k] * r.c[n - k];
        r.c[n] = -acc / a.c[0];
    }
    return r;
}

cplx ps_eval(const PowerSeries& a, cplx x) {
    cplx r{0.0, 0.0};
    for (std::size_t k = a.c.size(); k-- > 0;) r = r * x + a.c[k];
    return r;
}

PowerSeries series_of(const Expression& e, int order) {
    return PowerSeries{jet(e, cplx(0.0, 0.0), order)};
}

}  // namespace opcalc
