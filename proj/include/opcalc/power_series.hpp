#pragma once

// Truncated Maclaurin series with complex coefficients.  A series of order N
// stores coefficients c[0..N] of x^0..x^N.  Binary operations truncate to
// the smaller operand order: every returned coefficient is exact for the
// mathematical operation on the underlying functions.

#include <complex>
#include <vector>

#include "opcalc/expr.hpp"

namespace opcalc {

struct PowerSeries {
    std::vector<cplx> c;
    int order() const { return int(c.size()) - 1; }
    cplx coeff(int k) const {
        return k >= 0 && k < int(c.size()) ? c[std::size_t(k)] : cplx(0.0, 0.0);
    }
};

PowerSeries ps_make(std::vector<cplx> coeffs);
PowerSeries ps_zero(int order);
PowerSeries ps_add(const PowerSeries& a, const PowerSeries& b);
PowerSeries ps_sub(const PowerSeries& a, const PowerSeries& b);
PowerSeries ps_mul(const PowerSeries& a, const PowerSeries& b);
PowerSeries ps_scale(const PowerSeries& a, cplx s);

// f(g(x)) with g(0) = 0; throws ComposeNonzeroConstant otherwise.
PowerSeries ps_compose(const PowerSeries& f, const PowerSeries& g);

// 1/a with a[0] != 0; throws ZeroConstantTerm otherwise.
PowerSeries ps_reciprocal(const PowerSeries& a);

cplx ps_eval(const PowerSeries& a, cplx x);

// Maclaurin coefficients of an expression (jet at 0).
PowerSeries series_of(const Expression& e, int order);

}  // namespace opcalc
