#include "opcalc/operator_form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>

namespace opcalc {

namespace {

constexpr double kTol = 1e-12;
const cplx I{0.0, 1.0};

cplx unit_ipow(int k) {
    // i^k for any integer k
    int r = ((k % 4) + 4) % 4;
    switch (r) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

void flatten_sum(const Expression& e, std::vector<Expression>& out) {
    if (e.node().kind == Kind::Sum)
        for (const auto& k : e.node().kids) flatten_sum(k, out);
    else
        out.push_back(e);
}

void flatten_prod(const Expression& e, std::vector<Expression>& out) {
    if (e.node().kind == Kind::Prod)
        for (const auto& k : e.node().kids) flatten_prod(k, out);
    else
        out.push_back(e);
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
}

}  // namespace

// --------------------------------------------------------------- atoms

namespace {

std::vector<Atom> cross(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    std::vector<Atom> r;
    r.reserve(a.size() * b.size());
    if (a.size() * b.size() > 200000)
        throw UnliftableExpression("expansion too large");
    for (const auto& x : a)
        for (const auto& y : b) {
            Atom t;
            t.coeff = x.coeff * y.coeff;
            t.p = x.p + y.p;
            t.b = x.b + y.b;
            t.q = x.q + y.q;
            t.m = x.m + y.m;
            r.push_back(t);
        }
    return r;
}

std::vector<Atom> atoms_rec(const Expression& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const:
            if (n.cval == cplx(0.0, 0.0)) return {};
            return {Atom{n.cval, 0, {0.0, 0.0}, 0.0, 0}};
        case Kind::Lin: {
            std::vector<Atom> r;
            if (n.arg.alpha != cplx(0.0, 0.0)) r.push_back({n.arg.alpha, 1, {}, 0.0, 0});
            if (n.arg.c != cplx(0.0, 0.0)) r.push_back({n.arg.c, 0, {}, 0.0, 0});
            return r;
        }
        case Kind::Sum: {
            std::vector<Atom> r;
            for (const auto& k : n.kids) {
                auto a = atoms_rec(k);
                r.insert(r.end(), a.begin(), a.end());
            }
            return r;
        }
        case Kind::Prod: {
            std::vector<Atom> r = {Atom{{1.0, 0.0}, 0, {}, 0.0, 0}};
            for (const auto& k : n.kids) r = cross(r, atoms_rec(k));
            return r;
        }
        case Kind::Pow: {
            if (n.n >= 0) {
                std::vector<Atom> base = atoms_rec(n.kids[0]);
                std::vector<Atom> r = {Atom{{1.0, 0.0}, 0, {}, 0.0, 0}};
                for (int i = 0; i < n.n; ++i) r = cross(r, base);
                return r;
            }
            const Node& b = n.kids[0].node();
            if (b.kind == Kind::Lin && std::abs(b.arg.c) <= 1e-13) {
                Atom t;
                t.m = -n.n;
                t.coeff = 1.0;
                for (int i = 0; i < -n.n; ++i) t.coeff /= b.arg.alpha;
                return {t};
            }
            throw UnliftableExpression("negative power of " + to_string(n.kids[0]));
        }
        case Kind::Exp:
            return {Atom{std::exp(n.arg.c), 0, n.arg.alpha, 0.0, 0}};
        case Kind::Sin: {
            cplx ep = std::exp(I * n.arg.c), em = std::exp(-I * n.arg.c);
            return {Atom{ep / (2.0 * I), 0, I * n.arg.alpha, 0.0, 0},
                    Atom{-em / (2.0 * I), 0, -I * n.arg.alpha, 0.0, 0}};
        }
        case Kind::Cos: {
            cplx ep = std::exp(I * n.arg.c), em = std::exp(-I * n.arg.c);
            return {Atom{ep / 2.0, 0, I * n.arg.alpha, 0.0, 0},
                    Atom{em / 2.0, 0, -I * n.arg.alpha, 0.0, 0}};
        }
        case Kind::Gauss: {
            // exp(-(x+c)^2/(2 s)) = e^(-c^2/2s) e^(-c x / s) e^(-x^2/2s)
            Atom t;
            t.q = -1.0 / (2.0 * n.width);
            t.b = -n.arg.c / n.width;
            t.coeff = std::exp(-n.arg.c * n.arg.c / (2.0 * n.width));
            return {t};
        }
        case Kind::PV: {
            if (std::abs(n.arg.c) <= 1e-13) {
                Atom t;
                t.m = n.n;
                return {t};
            }
            throw UnliftableExpression("principal value away from the origin");
        }
        default:
            throw UnliftableExpression(to_string(e) +
                                       " is outside the exponential-polynomial-Gaussian class");
    }
}

}  // namespace

std::vector<Atom> decompose_atoms(const Expression& f) {
    std::vector<Atom> raw = atoms_rec(f);
    // cancel x^p against x^-m, then merge equal keys
    std::map<std::tuple<int, int, double, double, double>, cplx> merged;
    for (auto a : raw) {
        int net = a.p - a.m;
        a.p = net > 0 ? net : 0;
        a.m = net < 0 ? -net : 0;
        auto key = std::make_tuple(a.p, a.m, a.b.real(), a.b.imag(), a.q);
        merged[key] += a.coeff;
    }
    std::vector<Atom> out;
    for (const auto& [key, coeff] : merged) {
        if (std::abs(coeff) <= 1e-300) continue;
        Atom a;
        a.p = std::get<0>(key);
        a.m = std::get<1>(key);
        a.b = {std::get<2>(key), std::get<3>(key)};
        a.q = std::get<4>(key);
        a.coeff = coeff;
        out.push_back(a);
    }
    return out;
}

// ---------------------------------------------------------------- lift

OperatorForm lift(const Expression& f, Symbol s, int series_order) {
    OperatorForm op;
    op.symbol = s;
    std::string exact_msg, series_msg;
    try {
        std::vector<Atom> atoms = decompose_atoms(f);
        for (const auto& a : atoms) {
            OperatorTerm t;
            t.dpow = a.p;
            t.dinv = a.m;
            switch (s) {
                case Symbol::MinusID:
                    t.coeff = a.coeff * unit_ipow(-a.p) * unit_ipow(a.m);
                    t.shift = -I * a.b;
                    t.tau = -a.q;
                    break;
                case Symbol::PlusID:
                    t.coeff = a.coeff * unit_ipow(a.p) * unit_ipow(-a.m);
                    t.shift = I * a.b;
                    t.tau = -a.q;
                    break;
                case Symbol::PlusD:
                    t.coeff = a.coeff;
                    t.shift = a.b;
                    t.tau = a.q;
                    break;
            }
            op.exact.push_back(t);
        }
        op.has_exact = true;
    } catch (const EngineError& err) {
        exact_msg = err.what();
    }
    try {
        PowerSeries ps = series_of(f, series_order);
        cplx factor;
        switch (s) {
            case Symbol::MinusID: factor = -I; break;
            case Symbol::PlusID: factor = I; break;
            case Symbol::PlusD: factor = {1.0, 0.0}; break;
        }
        cplx fp{1.0, 0.0};
        for (auto& c : ps.c) {
            c *= fp;
            fp *= factor;
        }
        op.fallback = std::move(ps);
    } catch (const EngineError& err) {
        series_msg = err.what();
    }
    if (!op.has_exact && !op.fallback)
        throw UnliftableExpression("no exact decomposition (" + exact_msg +
                                   ") and no series (" + series_msg + ")");
    return op;
}

// ---------------------------------------------------------------- heat

namespace {

// reduce cofactor * delta^(n)(x+c) to pure delta derivatives at x+c
std::vector<std::pair<cplx, int>> delta_reduce(const Expression& cofactor,
                                               const Node& dnode) {
    std::vector<cplx> cj = jet(cofactor, -dnode.arg.c, dnode.n);
    std::vector<std::pair<cplx, int>> out;
    double fact = 1.0;
    for (int m = 0; m <= dnode.n; ++m) {
        if (m > 0) fact *= double(m);
        cplx gm = cj[std::size_t(m)] * fact;
        cplx coeff = binom(dnode.n, m) * (m % 2 == 0 ? 1.0 : -1.0) * gm;
        if (std::abs(coeff) > 1e-300) out.push_back({coeff, dnode.n - m});
        // note: jet coefficients are f^(m)/m!, fact restores the derivative
    }
    return out;
}

Expression heat_pure_delta(int order, cplx c, double tau) {
    if (tau == 0.0) return delta_of(order, Affine{{1.0, 0.0}, c});
    if (tau < 0.0)
        throw HeatRuleViolation("inverse heat flow applied to a bare delta");
    // e^(tau D^2) delta^(n)(x+c) = d^n/dx^n Gaussian(variance 2 tau)
    double s2 = 2.0 * tau;
    Expression g = product({constant(1.0 / std::sqrt(2.0 * M_PI * s2)),
                            gauss_of(s2, Affine{{1.0, 0.0}, c})});
    return differentiate(g, order);
}

// E_{j+1} = (x + 2 tau D) E_j starting from E_0 = base gives the heat image
// of x^j * (preimage of base); sum with poly coefficients.
Expression heat_poly_on_base(const std::vector<cplx>& poly, const Expression& base,
                             double tau) {
    std::vector<Expression> parts;
    Expression ej = base;
    for (std::size_t j = 0; j < poly.size(); ++j) {
        if (j > 0)
            ej = sum({product({variable(), ej}),
                      product({constant(2.0 * tau), differentiate(ej)})});
        if (poly[j] != cplx(0.0, 0.0))
            parts.push_back(product({constant(poly[j]), ej}));
    }
    return sum(std::move(parts));
}

Expression heat_piece(const Expression& piece, double tau);

Expression heat_expand_trig(std::vector<Expression> factors, std::size_t idx,
                            double tau) {
    const Node& s = factors[idx].node();
    Affine ap{I * s.arg.alpha, I * s.arg.c};
    Affine am{-I * s.arg.alpha, -I * s.arg.c};
    cplx cp, cm;
    if (s.kind == Kind::Sin) {
        cp = 1.0 / (2.0 * I);
        cm = -1.0 / (2.0 * I);
    } else {
        cp = 0.5;
        cm = 0.5;
    }
    std::vector<Expression> f1 = factors, f2 = factors;
    f1[idx] = product({constant(cp), exp_of(ap)});
    f2[idx] = product({constant(cm), exp_of(am)});
    return sum({heat_piece(product(std::move(f1)), tau),
                heat_piece(product(std::move(f2)), tau)});
}

Expression heat_piece(const Expression& piece, double tau) {
    std::vector<Expression> factors;
    flatten_prod(piece, factors);

    // normalise powers of primitives that stay in the class
    for (auto& f : factors) {
        const Node& k = f.node();
        if (k.kind != Kind::Pow || k.n < 1) continue;
        const Node& b = k.kids[0].node();
        if (b.kind == Kind::Exp)
            f = exp_of(Affine{b.arg.alpha * double(k.n), b.arg.c * double(k.n)});
        else if (b.kind == Kind::Gauss)
            f = gauss_of(b.width / double(k.n), b.arg);
        else if (b.kind == Kind::Sin || b.kind == Kind::Cos) {
            std::vector<Expression> copies(std::size_t(k.n), k.kids[0]);
            f = product(std::move(copies));
        }
    }
    {
        std::vector<Expression> reflat;
        for (const auto& f : factors) flatten_prod(f, reflat);
        factors = std::move(reflat);
    }

    for (std::size_t i = 0; i < factors.size(); ++i) {
        Kind kk = factors[i].node().kind;
        if (kk == Kind::Sin || kk == Kind::Cos) return heat_expand_trig(factors, i, tau);
    }

    std::vector<cplx> poly = {cplx(1.0, 0.0)};
    std::optional<Affine> expa;
    const Node* gauss_node = nullptr;
    const Node* delta_node = nullptr;
    std::vector<Expression> cof_for_delta;

    for (const auto& f : factors) {
        const Node& k = f.node();
        if (auto pc = poly_coeffs(f)) {
            std::vector<cplx> r(poly.size() + pc->size(), cplx(0.0, 0.0));
            for (std::size_t i = 0; i < poly.size(); ++i)
                for (std::size_t j = 0; j < pc->size(); ++j) r[i + j] += poly[i] * (*pc)[j];
            while (!r.empty() && r.back() == cplx(0.0, 0.0)) r.pop_back();
            poly = std::move(r);
            cof_for_delta.push_back(f);
        } else if (k.kind == Kind::Exp) {
            if (expa) {
                expa->alpha += k.arg.alpha;
                expa->c += k.arg.c;
            } else {
                expa = k.arg;
            }
            cof_for_delta.push_back(f);
        } else if (k.kind == Kind::Gauss) {
            if (gauss_node || delta_node)
                throw NoClosedForm("heat flow on a product of kernels");
            gauss_node = &k;
            cof_for_delta.push_back(f);
        } else if (k.kind == Kind::Delta) {
            if (delta_node || gauss_node)
                throw UndefinedDistribution("heat flow on a product with two kernels");
            delta_node = &k;
        } else {
            throw NoClosedForm("heat flow on " + to_string(f));
        }
    }
    if (poly.empty()) return constant(0.0);

    if (delta_node) {
        cplx c = delta_node->arg.c;
        if (c.imag() > kTol) return constant(0.0);
        if (c.imag() < -kTol)
            throw UndefinedDistribution("delta in the lower half plane");
        std::vector<Expression> others;
        for (const auto& f : factors)
            if (&f.node() != delta_node) others.push_back(f);
        Expression cof = product(std::move(others));
        std::vector<Expression> parts;
        for (const auto& [coeff, order] : delta_reduce(cof, *delta_node))
            parts.push_back(product({constant(coeff), heat_pure_delta(order, c, tau)}));
        return sum(std::move(parts));
    }

    if (gauss_node) {
        double s = gauss_node->width;
        cplx c = gauss_node->arg.c;
        cplx scale{1.0, 0.0};
        if (expa && expa->alpha != cplx(0.0, 0.0)) {
            // G(s, c) e^(beta x + d) = e^(d - beta c + s beta^2/2) G(s, c - s beta)
            cplx beta = expa->alpha;
            scale = std::exp(expa->c - beta * c + s * beta * beta / 2.0);
            c -= s * beta;
        } else if (expa) {
            scale = std::exp(expa->c);
        }
        double s2 = s + 2.0 * tau;
        Expression base;
        if (s2 > kTol * s) {
            base = product({constant(std::sqrt(s / s2) * scale),
                            gauss_of(s2, Affine{{1.0, 0.0}, c})});
        } else if (std::abs(s2) <= kTol * s) {
            base = product({constant(std::sqrt(2.0 * M_PI * s) * scale),
                            delta_of(0, Affine{{1.0, 0.0}, c})});
        } else {
            throw HeatRuleViolation("net Gaussian variance went negative");
        }
        return heat_poly_on_base(poly, base, tau);
    }

    // exponential (possibly constant) times polynomial
    cplx beta = expa ? expa->alpha : cplx(0.0, 0.0);
    cplx d = expa ? expa->c : cplx(0.0, 0.0);
    Expression base = product({constant(std::exp(tau * beta * beta)),
                               exp_of(Affine{beta, d})});
    return heat_poly_on_base(poly, base, tau);
}

}  // namespace

Expression heat_flow(const Expression& e, double tau) {
    if (tau == 0.0) return e;
    std::vector<Expression> pieces;
    flatten_sum(e, pieces);
    std::vector<Expression> out;
    out.reserve(pieces.size());
    for (const auto& p : pieces) out.push_back(heat_piece(p, tau));
    return sum(std::move(out));
}

// ---------------------------------------------------------------- apply

Expression apply_exact(const OperatorForm& op, const Expression& e) {
    if (!op.has_exact)
        throw UnliftableExpression("operator has no exact form");
    std::vector<Expression> parts;
    for (const auto& t : op.exact) {
        Expression cur = e;
        for (int i = 0; i < t.dinv; ++i) {
            cur = erase_upper_half_deltas(cur);
            cur = antiderivative(cur);
        }
        if (t.dpow > 0) cur = differentiate(cur, t.dpow);
        if (t.tau != 0.0) cur = heat_flow(cur, t.tau);
        if (t.shift != cplx(0.0, 0.0)) cur = shift(cur, t.shift);
        parts.push_back(product({constant(t.coeff), cur}));
    }
    return sum(std::move(parts));
}

cplx apply_truncated(const OperatorForm& op, const Expression& e, cplx x0, int N) {
    if (!op.fallback)
        throw UnliftableExpression("operator has no series fallback");
    if (op.fallback->order() < N)
        throw UnliftableExpression("series fallback shorter than requested order");
    std::vector<cplx> j = jet(e, x0, N);
    cplx acc{0.0, 0.0};
    double fact = 1.0;
    for (int n = 0; n <= N; ++n) {
        if (n > 0) fact *= double(n);
        acc += op.fallback->c[std::size_t(n)] * fact * j[std::size_t(n)];
    }
    return acc;
}

DistributionalValue apply_delta_of_derivative(cplx y, const Expression& e) {
    std::vector<Atom> atoms;
    try {
        atoms = decompose_atoms(e);
    } catch (const UnliftableExpression& err) {
        throw NotExponentialPolynomial(err.what());
    }
    DistributionalValue dv;
    for (const auto& a : atoms) {
        if (a.q != 0.0 || a.m != 0)
            throw NotExponentialPolynomial(
                "Gaussian or reciprocal factors have no delta image");
        // a x^p e^(b x): content a (-i)^p delta^(p)(y - i b)
        DeltaTerm t;
        t.location = y - I * a.b;
        t.order = a.p;
        t.coeff = a.coeff * unit_ipow(-a.p);
        dv.deltas.push_back(t);
    }
    std::sort(dv.deltas.begin(), dv.deltas.end(), [](const DeltaTerm& u, const DeltaTerm& v) {
        if (u.location.real() != v.location.real())
            return u.location.real() < v.location.real();
        if (u.location.imag() != v.location.imag())
            return u.location.imag() < v.location.imag();
        return u.order < v.order;
    });
    return dv;
}

}  // namespace opcalc
