#include "opcalc/transforms.hpp"

#include <cmath>

#include "jets.hpp"

namespace opcalc {

namespace {

const cplx I{0.0, 1.0};
constexpr double kTol = 1e-12;

Expression delta_at_origin() { return delta_of(0, Affine{{1.0, 0.0}, {0.0, 0.0}}); }

Expression halfline_kernel(cplx offset) {
    // theta transform kernel: pi delta(x + offset) + i pp(1/(x + offset))
    Affine a{{1.0, 0.0}, offset};
    return sum({product({constant(M_PI), delta_of(0, a)}),
                product({constant(I), pv_of(1, a)})});
}

cplx finite_value_at_zero(const Expression& e, const char* context) {
    DistributionalValue dv;
    try {
        dv = evaluate(e, cplx(0.0, 0.0));
    } catch (const PoleAtPoint& err) {
        throw DivergentIntegral(std::string(context) + ": " + err.what());
    }
    if (dv.has_on_point())
        throw DivergentIntegral(std::string(context) +
                                ": a delta term sits on the evaluation point");
    return dv.finite;
}

// moments of exp(b x - Q x^2) over the line:
//   m_0 = sqrt(pi/Q) exp(b^2 / 4Q),  m_p = (b m_{p-1} + (p-1) m_{p-2}) / (2Q)
cplx damped_moment(int p, double Q, cplx b) {
    cplx m0 = std::sqrt(M_PI / Q) * std::exp(b * b / (4.0 * Q));
    if (p == 0) return m0;
    cplx prev2 = m0;
    cplx prev1 = b / (2.0 * Q) * m0;
    for (int k = 2; k <= p; ++k) {
        cplx cur = (b * prev1 + double(k - 1) * prev2) / (2.0 * Q);
        prev2 = prev1;
        prev1 = cur;
    }
    return prev1;
}

}  // namespace

TransformResult fourier_via_delta(const Expression& g, double sigma) {
    OperatorForm op = lift(g, Symbol::MinusID);
    if (!op.has_exact)
        throw UnliftableExpression("Fourier transform needs the exact operator route");
    Expression operand;
    if (sigma == 0.0) {
        operand = delta_at_origin();
    } else {
        if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
        operand = product({constant(1.0 / std::sqrt(2.0 * M_PI * sigma)),
                           gauss_of(sigma, Affine{{1.0, 0.0}, {0.0, 0.0}})});
        for (auto& t : op.exact) t.tau -= sigma / 2.0;
    }
    Expression applied = apply_exact(op, operand);
    TransformResult r;
    r.method = "fou1";
    r.closed_form = product({constant(std::sqrt(2.0 * M_PI)), applied});
    r.diagnostics.push_back({"sigma", sigma});
    return r;
}

TransformResult fourier_via_shifted_delta(const Expression& g, cplx y, double x_probe) {
    DistributionalValue content = apply_delta_of_derivative(y, g);
    for (auto& d : content.deltas) d.coeff *= std::sqrt(2.0 * M_PI);
    TransformResult r;
    r.method = "fourier2";
    r.distribution = std::move(content);
    r.diagnostics.push_back({"probe", x_probe});
    return r;
}

TransformResult integrate_line(const Expression& f) {
    OperatorForm op = lift(f, Symbol::MinusID);
    if (!op.has_exact)
        throw UnliftableExpression("whole-line integral needs the exact operator route");
    Expression applied = apply_exact(op, delta_at_origin());
    TransformResult r;
    r.method = "int1";
    r.scalar = 2.0 * M_PI * finite_value_at_zero(applied, "whole-line integral");
    r.closed_form = applied;
    return r;
}

TransformResult integrate_line_regularized(const Expression& f, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    std::vector<Atom> atoms;
    try {
        atoms = decompose_atoms(f);
    } catch (const UnliftableExpression&) {
        throw;
    }
    for (const auto& a : atoms)
        if (a.m != 0)
            throw UnliftableExpression(
                "damped route needs a direct exponential-polynomial-Gaussian integrand");

    auto damped_value = [&atoms](double sig) {
        cplx acc{0.0, 0.0};
        for (const auto& a : atoms) {
            double Q = sig / 2.0 - a.q;
            acc += a.coeff * damped_moment(a.p, Q, a.b);
        }
        return acc;
    };

    TransformResult r;
    r.method = "int2";
    if (sigma > 0.0) {
        r.scalar = damped_value(sigma);
        r.diagnostics.push_back({"sigma", sigma});
        return r;
    }
    // sigma -> 0 limit, atom by atom
    cplx acc{0.0, 0.0};
    bool oscillatory = false;
    for (const auto& a : atoms) {
        if (a.q < 0.0) {
            acc += a.coeff * damped_moment(a.p, -a.q, a.b);
        } else if (std::abs(a.b) <= kTol) {
            throw DivergentIntegral("undamped polynomial part " +
                                    format_complex(a.coeff) + " x^" + std::to_string(a.p));
        } else if (std::abs(a.b.real()) > kTol) {
            throw DivergentIntegral("exponentially growing part exp(" +
                                    format_complex(a.b) + " x)");
        } else {
            oscillatory = true;  // pure oscillation: damped limit is zero
        }
    }
    if (oscillatory) {
        for (double sig : {0.1, 0.05, 0.025}) {
            cplx v = damped_value(sig);
            r.diagnostics.push_back({"I(sigma=" + std::to_string(sig) + ")", v.real()});
        }
    }
    r.scalar = acc;
    return r;
}

TransformResult integrate_halfline(const Expression& f, double a) {
    Expression fs = a == 0.0 ? f : shift(f, cplx(a, 0.0));
    OperatorForm op = lift(fs, Symbol::MinusID);
    if (!op.has_exact)
        throw UnliftableExpression("half-line integral needs the exact operator route");
    Expression applied = apply_exact(op, halfline_kernel({0.0, 0.0}));
    TransformResult r;
    r.method = "halfline";
    r.scalar = finite_value_at_zero(applied, "half-line integral");
    r.closed_form = applied;
    return r;
}

TransformResult laplace_transform(const Expression& f, double a) {
    if (!(a > 0.0))
        throw DivergentIntegral("the decay parameter of the transform must be positive");
    OperatorForm op = lift(f, Symbol::MinusID);
    if (!op.has_exact)
        throw UnliftableExpression("transform needs the exact operator route");
    Expression applied = apply_exact(op, halfline_kernel(cplx(0.0, a)));
    TransformResult r;
    r.method = "laplace";
    r.scalar = finite_value_at_zero(applied, "laplace transform");
    r.closed_form = applied;
    return r;
}

namespace {

// k-th derivative of K(z) = (e^{i b z} - e^{i a z})/(i z) at z, where K is
// entire with Maclaurin coefficients i^n (b^{n+1}-a^{n+1})/(n+1)!.
cplx interval_kernel_deriv(double a, double b, int k, cplx z) {
    using namespace jets;
    if (std::abs(z) <= 0.5) {
        cplx acc{0.0, 0.0};
        cplx pa{a, 0.0}, pb{b, 0.0};  // a^{n+1}, b^{n+1}
        cplx itop{1.0, 0.0};          // i^n
        double inv_fact = 1.0;        // 1/(n+1)!
        cplx zpow{1.0, 0.0};          // z^{n-k}
        int quiet = 0;
        for (int n = 0; n < 400; ++n) {
            inv_fact /= double(n + 1);
            if (n >= k) {
                double falling = 1.0;  // n!/(n-k)!
                for (int j = 0; j < k; ++j) falling *= double(n - j);
                cplx term = itop * (pb - pa) * inv_fact * falling * zpow;
                acc += term;
                zpow *= z;
                if (std::abs(term) <= 1e-18 * (1.0 + std::abs(acc)) && n >= k + 8) {
                    if (++quiet >= 3) break;
                } else {
                    quiet = 0;
                }
            }
            pa *= a;
            pb *= b;
            itop *= I;
        }
        return acc;
    }
    Jet zj = jconst(z, std::size_t(k) + 2);  // room for the seed even at k = 0
    zj[1] = 1.0;
    Jet num = jadd(jexp(jscale(zj, cplx(0.0, b))),
                   jscale(jexp(jscale(zj, cplx(0.0, a))), cplx(-1.0, 0.0)));
    Jet den = jscale(zj, cplx(0.0, 1.0));
    Jet r = jmul(num, jrecip(den, "interval kernel"));
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= double(j);
    return r[std::size_t(k)] * fact;
}

}  // namespace

TransformResult integrate_interval(const Expression& f, double a, double b) {
    OperatorForm op = lift(f, Symbol::MinusID);
    if (!op.has_exact)
        throw UnliftableExpression("interval integral needs the exact operator route");
    cplx acc{0.0, 0.0};
    for (const auto& t : op.exact) {
        if (t.tau != 0.0)
            throw NoClosedForm("Gaussian factors on a finite interval");
        if (t.dinv != 0)
            throw NoClosedForm("reciprocal factors on a finite interval");
        acc += t.coeff * interval_kernel_deriv(a, b, t.dpow, t.shift);
    }
    TransformResult r;
    r.method = "interval";
    r.scalar = acc;
    return r;
}

namespace {

// k-th derivative of A(y) = (e^{x y} - 1)/y at y = z; Maclaurin
// coefficients x^{n+1}/(n+1)!.
cplx anti_kernel_deriv(double x, int k, cplx z) {
    using namespace jets;
    if (std::abs(z) <= 0.5) {
        cplx acc{0.0, 0.0};
        double xpow = x;       // x^{n+1}
        double inv_fact = 1.0; // 1/(n+1)!
        cplx zpow{1.0, 0.0};
        int quiet = 0;
        for (int n = 0; n < 400; ++n) {
            inv_fact /= double(n + 1);
            if (n >= k) {
                double falling = 1.0;
                for (int j = 0; j < k; ++j) falling *= double(n - j);
                cplx term = xpow * inv_fact * falling * zpow;
                acc += term;
                zpow *= z;
                if (std::abs(term) <= 1e-18 * (1.0 + std::abs(acc)) && n >= k + 8) {
                    if (++quiet >= 3) break;
                } else {
                    quiet = 0;
                }
            }
            xpow *= x;
        }
        return acc;
    }
    Jet zj = jconst(z, std::size_t(k) + 2);  // room for the seed even at k = 0
    zj[1] = 1.0;
    Jet num = jexp(jscale(zj, cplx(x, 0.0)));
    num[0] -= 1.0;
    Jet r = jmul(num, jrecip(zj, "antiderivative kernel"));
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= double(j);
    return r[std::size_t(k)] * fact;
}

}  // namespace

TransformResult antiderivative_value(const Expression& f, double x) {
    OperatorForm op = lift(f, Symbol::PlusD);
    if (!op.has_exact)
        throw UnliftableExpression("antiderivative needs the exact operator route");
    cplx acc{0.0, 0.0};
    for (const auto& t : op.exact) {
        if (t.tau != 0.0) throw NoClosedForm("Gaussian factors have no closed antiderivative");
        if (t.dinv != 0) throw NoClosedForm("reciprocal factors have no closed antiderivative");
        acc += t.coeff * anti_kernel_deriv(x, t.dpow, t.shift);
    }
    TransformResult r;
    r.method = "antiderivative";
    r.scalar = acc;
    return r;
}

}  // namespace opcalc
