#include "opcalc/expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "jets.hpp"

namespace opcalc {

namespace {

constexpr double kTol = 1e-12;  // absolute; evaluation points are O(1..10)

std::shared_ptr<const Node> make(Node n) {
    return std::make_shared<const Node>(std::move(n));
}

bool nearly_real(cplx v) { return std::abs(v.imag()) <= kTol * (1.0 + std::abs(v)); }

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
}

cplx ipow(cplx v, int k) {
    if (k == 0) return {1.0, 0.0};
    bool neg = k < 0;
    int reps = neg ? -k : k;
    cplx acc{1.0, 0.0};
    for (int i = 0; i < reps; ++i) acc *= v;
    if (neg) {
        if (std::abs(acc) < 1e-300) throw PoleAtPoint("negative power of zero");
        acc = 1.0 / acc;
    }
    return acc;
}

}  // namespace

Expression::Expression() : p_(make(Node{})) {}

bool is_zero(const Expression& e) {
    return e.node().kind == Kind::Const && e.node().cval == cplx(0.0, 0.0);
}

// ---------------------------------------------------------------- factories

Expression constant(cplx v) {
    Node n;
    n.kind = Kind::Const;
    n.cval = v;
    return Expression(make(std::move(n)));
}
Expression constant(double v) { return constant(cplx(v, 0.0)); }

Expression linear(cplx alpha, cplx c) {
    if (alpha == cplx(0.0, 0.0)) return constant(c);
    Node n;
    n.kind = Kind::Lin;
    n.arg = Affine{alpha, c};
    return Expression(make(std::move(n)));
}

Expression variable() { return linear(cplx(1.0, 0.0), cplx(0.0, 0.0)); }

Expression sum(std::vector<Expression> parts) {
    std::vector<Expression> flat;
    cplx c{0.0, 0.0};
    std::function<void(const Expression&)> absorb = [&](const Expression& e) {
        if (e.node().kind == Kind::Sum) {
            for (const auto& k : e.node().kids) absorb(k);
        } else if (e.node().kind == Kind::Const) {
            c += e.node().cval;
        } else {
            flat.push_back(e);
        }
    };
    for (const auto& p : parts) absorb(p);
    if (c != cplx(0.0, 0.0)) flat.push_back(constant(c));
    if (flat.empty()) return constant(0.0);
    if (flat.size() == 1) return flat[0];
    Node n;
    n.kind = Kind::Sum;
    n.kids = std::move(flat);
    return Expression(make(std::move(n)));
}

Expression product(std::vector<Expression> parts) {
    std::vector<Expression> flat;
    cplx c{1.0, 0.0};
    std::function<void(const Expression&)> absorb = [&](const Expression& e) {
        if (e.node().kind == Kind::Prod) {
            for (const auto& k : e.node().kids) absorb(k);
        } else if (e.node().kind == Kind::Const) {
            c *= e.node().cval;
        } else {
            flat.push_back(e);
        }
    };
    for (const auto& p : parts) absorb(p);
    if (c == cplx(0.0, 0.0)) return constant(0.0);
    if (flat.empty()) return constant(c);
    std::vector<Expression> kids;
    if (c != cplx(1.0, 0.0)) kids.push_back(constant(c));
    kids.insert(kids.end(), flat.begin(), flat.end());
    if (kids.size() == 1) return kids[0];
    Node n;
    n.kind = Kind::Prod;
    n.kids = std::move(kids);
    return Expression(make(std::move(n)));
}

Expression powi(const Expression& base, int k) {
    if (k == 0) return constant(1.0);
    if (k == 1) return base;
    if (base.node().kind == Kind::Const) return constant(ipow(base.node().cval, k));
    if (base.node().kind == Kind::Pow) return powi(base.node().kids[0], k * base.node().n);
    Node n;
    n.kind = Kind::Pow;
    n.n = k;
    n.kids = {base};
    return Expression(make(std::move(n)));
}

namespace {
Expression smooth_primitive(Kind k, Affine a) {
    if (a.alpha == cplx(0.0, 0.0)) {
        switch (k) {
            case Kind::Exp: return constant(std::exp(a.c));
            case Kind::Sin: return constant(std::sin(a.c));
            case Kind::Cos: return constant(std::cos(a.c));
            case Kind::Log:
                if (std::abs(a.c) < 1e-300) throw PoleAtPoint("log(0)");
                return constant(std::log(a.c));
            case Kind::LogAbs:
                if (std::abs(a.c) < 1e-300) throw PoleAtPoint("log|0|");
                return constant(cplx(std::log(std::abs(a.c)), 0.0));
            default: break;
        }
    }
    Node n;
    n.kind = k;
    n.arg = a;
    return Expression(make(std::move(n)));
}
}  // namespace

Expression exp_of(Affine a) { return smooth_primitive(Kind::Exp, a); }
Expression sin_of(Affine a) { return smooth_primitive(Kind::Sin, a); }
Expression cos_of(Affine a) { return smooth_primitive(Kind::Cos, a); }
Expression log_of(Affine a) { return smooth_primitive(Kind::Log, a); }
Expression logabs_of(Affine a) { return smooth_primitive(Kind::LogAbs, a); }

Expression gauss_of(double width, Affine a) {
    if (!(width > 0.0)) throw std::invalid_argument("gauss width must be > 0");
    if (!nearly_real(a.alpha))
        throw std::invalid_argument("gauss argument slope must be real");
    double al = a.alpha.real();
    if (al == 0.0) return constant(std::exp(-a.c * a.c / (2.0 * width)));
    Node n;
    n.kind = Kind::Gauss;
    n.width = width / (al * al);
    n.arg = Affine{cplx(1.0, 0.0), a.c / al};
    return Expression(make(std::move(n)));
}

Expression theta_of(Affine a) {
    if (!nearly_real(a.alpha))
        throw UndefinedDistribution("step function with non-real slope");
    double al = a.alpha.real();
    if (al == 0.0) {
        if (!nearly_real(a.c))
            throw UndefinedDistribution("step function at non-real point");
        double c = a.c.real();
        return constant(c > kTol ? 1.0 : (c < -kTol ? 0.0 : 0.5));
    }
    Node n;
    n.kind = Kind::Theta;
    n.arg = Affine{cplx(1.0, 0.0), a.c / al};
    Expression unit(make(std::move(n)));
    if (al > 0.0) return unit;
    // theta(-u) = 1 - theta(u)
    return sum({constant(1.0), product({constant(-1.0), unit})});
}

Expression delta_of(int order, Affine a) {
    if (order < 0) throw std::invalid_argument("delta order must be >= 0");
    if (!nearly_real(a.alpha))
        throw UndefinedDistribution("delta with non-real slope");
    double al = a.alpha.real();
    if (al == 0.0) throw UndefinedDistribution("delta of a constant argument");
    Node n;
    n.kind = Kind::Delta;
    n.n = order;
    n.arg = Affine{cplx(1.0, 0.0), a.c / al};
    Expression unit(make(std::move(n)));
    // delta^(n)(a u) = a^-n |a|^-1 delta^(n)(u) for real a != 0
    cplx coeff = ipow(cplx(al, 0.0), -order) / std::abs(al);
    if (coeff == cplx(1.0, 0.0)) return unit;
    return product({constant(coeff), unit});
}

Expression pv_of(int k, Affine a) {
    if (k < 1) throw std::invalid_argument("pv power must be >= 1");
    if (!nearly_real(a.alpha))
        throw UndefinedDistribution("principal value with non-real slope");
    double al = a.alpha.real();
    if (al == 0.0) {
        if (std::abs(a.c) < 1e-300) throw PoleAtPoint("pv of constant zero");
        return constant(ipow(a.c, -k));
    }
    Node n;
    n.kind = Kind::PV;
    n.n = k;
    n.arg = Affine{cplx(1.0, 0.0), a.c / al};
    Expression unit(make(std::move(n)));
    cplx coeff = ipow(cplx(al, 0.0), -k);
    if (coeff == cplx(1.0, 0.0)) return unit;
    return product({constant(coeff), unit});
}

// ---------------------------------------------------------------- calculus

Expression differentiate(const Expression& e, int times) {
    if (times < 0) throw std::invalid_argument("negative derivative order");
    Expression cur = e;
    for (int t = 0; t < times; ++t) {
        const Node& n = cur.node();
        switch (n.kind) {
            case Kind::Const: cur = constant(0.0); break;
            case Kind::Lin: cur = constant(n.arg.alpha); break;
            case Kind::Sum: {
                std::vector<Expression> parts;
                for (const auto& k : n.kids) parts.push_back(differentiate(k));
                cur = sum(std::move(parts));
                break;
            }
            case Kind::Prod: {
                std::vector<Expression> terms;
                for (std::size_t i = 0; i < n.kids.size(); ++i) {
                    std::vector<Expression> fs = n.kids;
                    fs[i] = differentiate(fs[i]);
                    terms.push_back(product(std::move(fs)));
                }
                cur = sum(std::move(terms));
                break;
            }
            case Kind::Pow:
                cur = product({constant(double(n.n)), powi(n.kids[0], n.n - 1),
                               differentiate(n.kids[0])});
                break;
            case Kind::Exp: cur = product({constant(n.arg.alpha), exp_of(n.arg)}); break;
            case Kind::Sin: cur = product({constant(n.arg.alpha), cos_of(n.arg)}); break;
            case Kind::Cos: cur = product({constant(-n.arg.alpha), sin_of(n.arg)}); break;
            case Kind::Log:
            case Kind::LogAbs:
                cur = product({constant(n.arg.alpha), pv_of(1, n.arg)});
                break;
            case Kind::Gauss:
                cur = product({constant(-1.0 / n.width), linear(1.0, n.arg.c),
                               Expression(make(Node(n)))});
                break;
            case Kind::Theta: cur = delta_of(0, n.arg); break;
            case Kind::Delta: cur = delta_of(n.n + 1, n.arg); break;
            case Kind::PV:
                cur = product({constant(double(-n.n)), pv_of(n.n + 1, n.arg)});
                break;
        }
    }
    return cur;
}

Expression shift(const Expression& e, cplx w) {
    if (w == cplx(0.0, 0.0)) return e;
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const: return e;
        case Kind::Sum:
        case Kind::Prod:
        case Kind::Pow: {
            Node m(n);
            for (auto& k : m.kids) k = shift(k, w);
            return Expression(make(std::move(m)));
        }
        default: {
            Node m(n);
            m.arg.c += m.arg.alpha * w;
            return Expression(make(std::move(m)));
        }
    }
}

// ---- polynomial helpers (coefficient vectors, lowest degree first) ----

namespace {

using Poly = std::vector<cplx>;

void ptrim(Poly& p) {
    while (!p.empty() && p.back() == cplx(0.0, 0.0)) p.pop_back();
}

Poly padd(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    ptrim(r);
    return r;
}

Poly pmul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ptrim(r);
    return r;
}

cplx peval(const Poly& p, cplx x) {
    cplx r{0.0, 0.0};
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

Poly pderiv(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly r(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) r[i - 1] = double(i) * p[i];
    return r;
}

Poly pinteg(const Poly& p) {
    Poly r(p.size() + 1, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < p.size(); ++i) r[i + 1] = p[i] / double(i + 1);
    ptrim(r);
    return r;
}

// rewrite p(x) in powers of u = x + c:  p(x) = q(u) with x = u - c
Poly precenter(const Poly& p, cplx c) {
    Poly q = {};
    Poly shifted = {};  // (u - c)^k, built incrementally
    Poly base = {-c, cplx(1.0, 0.0)};
    Poly cur = {cplx(1.0, 0.0)};
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] != cplx(0.0, 0.0)) {
            Poly t = cur;
            for (auto& v : t) v *= p[k];
            q = padd(q, t);
        }
        cur = pmul(cur, base);
    }
    (void)shifted;
    return q;
}

Expression poly_to_expr(const Poly& p) {
    std::vector<Expression> parts;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == cplx(0.0, 0.0)) continue;
        if (i == 0)
            parts.push_back(constant(p[i]));
        else
            parts.push_back(product({constant(p[i]), powi(variable(), int(i))}));
    }
    return sum(std::move(parts));
}

}  // namespace

std::optional<std::vector<cplx>> poly_coeffs(const Expression& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const: {
            if (n.cval == cplx(0.0, 0.0)) return Poly{};
            return Poly{n.cval};
        }
        case Kind::Lin: return Poly{n.arg.c, n.arg.alpha};
        case Kind::Sum: {
            Poly acc{};
            for (const auto& k : n.kids) {
                auto pk = poly_coeffs(k);
                if (!pk) return std::nullopt;
                acc = padd(acc, *pk);
            }
            return acc;
        }
        case Kind::Prod: {
            Poly acc{cplx(1.0, 0.0)};
            for (const auto& k : n.kids) {
                auto pk = poly_coeffs(k);
                if (!pk) return std::nullopt;
                acc = pmul(acc, *pk);
            }
            return acc;
        }
        case Kind::Pow: {
            if (n.n < 0) return std::nullopt;
            auto pk = poly_coeffs(n.kids[0]);
            if (!pk) return std::nullopt;
            Poly acc{cplx(1.0, 0.0)};
            for (int i = 0; i < n.n; ++i) acc = pmul(acc, *pk);
            return acc;
        }
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------- jets

std::vector<cplx> jet(const Expression& e, cplx x0, int order) {
    using namespace jets;
    std::size_t len = std::size_t(order) + 1;
    const Node& n = e.node();
    auto affine_jet = [&](const Affine& a) {
        Jet j = jconst(a.at(x0), len);
        if (len > 1) j[1] = a.alpha;
        return j;
    };
    switch (n.kind) {
        case Kind::Const: return jconst(n.cval, len);
        case Kind::Lin: return affine_jet(n.arg);
        case Kind::Sum: {
            Jet acc = jconst(cplx(0.0, 0.0), len);
            for (const auto& k : n.kids) acc = jadd(acc, jet(k, x0, order));
            return acc;
        }
        case Kind::Prod: {
            Jet acc = jconst(cplx(1.0, 0.0), len);
            for (const auto& k : n.kids) acc = jmul(acc, jet(k, x0, order));
            return acc;
        }
        case Kind::Pow: return jpowi(jet(n.kids[0], x0, order), n.n, "power");
        case Kind::Exp: return jexp(affine_jet(n.arg));
        case Kind::Sin: return jsin(affine_jet(n.arg));
        case Kind::Cos: return jcos(affine_jet(n.arg));
        case Kind::Log: return jlog(affine_jet(n.arg), "log");
        case Kind::LogAbs: {
            Jet l = jlog(affine_jet(n.arg), "log||");
            for (auto& v : l) v = cplx(v.real(), 0.0);
            return l;
        }
        case Kind::Gauss: {
            Jet u = affine_jet(n.arg);
            Jet h = jscale(jmul(u, u), cplx(-1.0 / (2.0 * n.width), 0.0));
            return jexp(h);
        }
        case Kind::Theta: {
            cplx z = n.arg.at(x0);
            if (std::abs(z.imag()) > kTol)
                throw UndefinedDistribution("step function at non-real point");
            if (std::abs(z.real()) <= kTol)
                throw NotSmoothAtOrigin("expansion on the jump of a step function");
            return jconst(z.real() > 0.0 ? 1.0 : 0.0, len);
        }
        case Kind::Delta: {
            cplx z = n.arg.at(x0);
            if (z.imag() > kTol) return jconst(cplx(0.0, 0.0), len);
            if (z.imag() < -kTol)
                throw UndefinedDistribution("delta in the lower half plane");
            if (std::abs(z.real()) <= kTol)
                throw NotSmoothAtOrigin("expansion on the support of a delta");
            return jconst(cplx(0.0, 0.0), len);
        }
        case Kind::PV: {
            cplx z = n.arg.at(x0);
            if (std::abs(z) <= kTol) throw PoleAtPoint("expansion at a pv pole");
            return jpowi(affine_jet(n.arg), -n.n, "pv");
        }
    }
    throw std::logic_error("unhandled node kind in jet");
}

// ---------------------------------------------------------------- evaluate

bool DistributionalValue::has_on_point(double tol) const {
    for (const auto& d : deltas)
        if (std::abs(d.coeff) > tol) return true;
    return false;
}

namespace {

void merge_deltas(std::vector<DeltaTerm>& ds) {
    std::vector<DeltaTerm> out;
    for (const auto& d : ds) {
        bool merged = false;
        for (auto& o : out) {
            if (o.order == d.order && std::abs(o.location - d.location) <= kTol) {
                o.coeff += d.coeff;
                merged = true;
                break;
            }
        }
        if (!merged) out.push_back(d);
    }
    std::erase_if(out, [](const DeltaTerm& d) { return std::abs(d.coeff) <= 1e-300; });
    ds = std::move(out);
}

}  // namespace

DistributionalValue evaluate(const Expression& e, cplx x0) {
    const Node& n = e.node();
    DistributionalValue r;
    switch (n.kind) {
        case Kind::Const: r.finite = n.cval; return r;
        case Kind::Lin: r.finite = n.arg.at(x0); return r;
        case Kind::Exp: r.finite = std::exp(n.arg.at(x0)); return r;
        case Kind::Sin: r.finite = std::sin(n.arg.at(x0)); return r;
        case Kind::Cos: r.finite = std::cos(n.arg.at(x0)); return r;
        case Kind::Log: {
            cplx z = n.arg.at(x0);
            if (std::abs(z) <= kTol) throw PoleAtPoint("log at its branch point");
            r.finite = std::log(z);
            return r;
        }
        case Kind::LogAbs: {
            cplx z = n.arg.at(x0);
            if (std::abs(z) <= kTol) throw PoleAtPoint("log|.| at zero");
            r.finite = cplx(std::log(std::abs(z)), 0.0);
            return r;
        }
        case Kind::Gauss: {
            cplx u = n.arg.at(x0);
            r.finite = std::exp(-u * u / (2.0 * n.width));
            return r;
        }
        case Kind::Theta: {
            cplx z = n.arg.at(x0);
            if (std::abs(z.imag()) > kTol)
                throw UndefinedDistribution("step function at non-real point");
            double t = z.real();
            r.finite = t > kTol ? 1.0 : (t < -kTol ? 0.0 : 0.5);
            return r;
        }
        case Kind::Delta: {
            cplx z = n.arg.at(x0);
            if (z.imag() > kTol) return r;  // identically zero upstairs
            if (z.imag() < -kTol)
                throw UndefinedDistribution("delta in the lower half plane");
            if (std::abs(z.real()) <= kTol) r.deltas.push_back({z, n.n, {1.0, 0.0}});
            return r;
        }
        case Kind::PV: {
            cplx z = n.arg.at(x0);
            if (std::abs(z) <= kTol) throw PoleAtPoint("principal value at its pole");
            r.finite = ipow(z, -n.n);
            return r;
        }
        case Kind::Sum: {
            for (const auto& k : n.kids) {
                DistributionalValue v = evaluate(k, x0);
                r.finite += v.finite;
                r.deltas.insert(r.deltas.end(), v.deltas.begin(), v.deltas.end());
            }
            merge_deltas(r.deltas);
            return r;
        }
        case Kind::Pow: {
            DistributionalValue v = evaluate(n.kids[0], x0);
            if (!v.deltas.empty())
                throw UndefinedDistribution("integer power of a distribution");
            r.finite = ipow(v.finite, n.n);
            return r;
        }
        case Kind::Prod: {
            std::vector<DistributionalValue> vals;
            vals.reserve(n.kids.size());
            int dist_idx = -1;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                vals.push_back(evaluate(n.kids[i], x0));
                if (!vals.back().deltas.empty()) {
                    if (dist_idx >= 0)
                        throw UndefinedDistribution("product of two distributions");
                    dist_idx = int(i);
                }
            }
            cplx fin{1.0, 0.0};
            for (const auto& v : vals) fin *= v.finite;
            r.finite = fin;
            if (dist_idx >= 0) {
                std::vector<Expression> others;
                for (std::size_t i = 0; i < n.kids.size(); ++i)
                    if (int(i) != dist_idx) others.push_back(n.kids[i]);
                Expression cof = product(std::move(others));
                for (const auto& d : vals[dist_idx].deltas) {
                    // g(x) delta^(n)(u) = sum_m C(n,m) (-1)^m g^(m)(root) delta^(n-m)(u)
                    std::vector<cplx> cj = jet(cof, x0 - d.location, d.order);
                    double fact = 1.0;
                    for (int m = 0; m <= d.order; ++m) {
                        if (m > 0) fact *= double(m);
                        cplx gm = cj[std::size_t(m)] * fact;
                        cplx coeff = d.coeff * binom(d.order, m) *
                                     (m % 2 == 0 ? 1.0 : -1.0) * gm;
                        if (std::abs(coeff) > 1e-300)
                            r.deltas.push_back({d.location, d.order - m, coeff});
                    }
                }
                merge_deltas(r.deltas);
            }
            return r;
        }
    }
    throw std::logic_error("unhandled node kind in evaluate");
}

// ------------------------------------------------------------ antiderivative

namespace {

bool offset_is_real(cplx c) { return std::abs(c.imag()) <= kTol * (1.0 + std::abs(c)); }

Expression log_or_logabs(const Affine& a) {
    // log|.| is the distributional antiderivative of pp(1/u) on the real
    // line; the principal branch is correct once the pole sits off the axis.
    return offset_is_real(a.c) ? logabs_of(a) : log_of(a);
}

Expression anti_poly_times_exp(const Poly& p, const Affine& a) {
    // integral of p(x) e^(alpha x + c): e^u * sum_k (-1)^k p^(k)(x)/alpha^(k+1)
    Poly acc{};
    Poly dk = p;
    cplx denom = a.alpha;
    int sign = 1;
    while (!dk.empty()) {
        Poly t = dk;
        for (auto& v : t) v *= double(sign) / denom;
        acc = padd(acc, t);
        dk = pderiv(dk);
        denom *= a.alpha;
        sign = -sign;
    }
    return product({poly_to_expr(acc), exp_of(a)});
}

Expression anti_poly_times_pv(const Poly& p, int k, const Affine& a);

Expression anti_poly_times_log(const Poly& p, const Node& lnode) {
    // integral of p(x) L(u) by parts:  P L - integral of P * alpha/u
    Poly P = pinteg(p);
    Expression first = product({poly_to_expr(P), Expression(std::make_shared<const Node>(lnode))});
    Poly Q = P;
    for (auto& v : Q) v *= lnode.arg.alpha;
    Expression second = anti_poly_times_pv(Q, 1, Affine{cplx(1.0, 0.0), lnode.arg.c});
    return sum({first, product({constant(-1.0), second})});
}

Expression anti_poly_times_pv(const Poly& p, int k, const Affine& a) {
    // integral of p(x) / u^k with u = x + c: recenter p in u and integrate
    // monomial by monomial.
    Poly q = precenter(p, a.c);
    std::vector<Expression> parts;
    for (std::size_t j = 0; j < q.size(); ++j) {
        if (q[j] == cplx(0.0, 0.0)) continue;
        int ex = int(j) - k;  // integrand monomial u^ex
        if (ex == -1) {
            parts.push_back(product({constant(q[j]), log_or_logabs(a)}));
        } else if (ex >= 0) {
            parts.push_back(
                product({constant(q[j] / double(ex + 1)), powi(linear(1.0, a.c), ex + 1)}));
        } else {
            parts.push_back(
                product({constant(q[j] / double(ex + 1)), pv_of(-(ex + 1), a)}));
        }
    }
    return sum(std::move(parts));
}

Expression anti_poly_times_theta(const Poly& p, const Node& tnode) {
    // integral of p(x) theta(x+c) = (P(x) - P(-c)) theta(x+c)
    if (!offset_is_real(tnode.arg.c))
        throw UndefinedDistribution("step function at non-real point");
    Poly P = pinteg(p);
    cplx at_root = peval(P, -tnode.arg.c);
    Expression jump = sum({poly_to_expr(P), constant(-at_root)});
    return product({jump, Expression(std::make_shared<const Node>(tnode))});
}

Expression anti_delta_node(const Node& dnode) {
    cplx c = dnode.arg.c;
    if (c.imag() > kTol) return constant(0.0);  // identically zero expression
    if (c.imag() < -kTol)
        throw UndefinedDistribution("delta in the lower half plane");
    if (dnode.n == 0) return theta_of(dnode.arg);
    Node m(dnode);
    m.n -= 1;
    return Expression(std::make_shared<const Node>(m));
}

Expression anti_poly_times_delta(const Poly& p, const Node& dnode) {
    cplx c = dnode.arg.c;
    if (c.imag() > kTol) return constant(0.0);
    if (c.imag() < -kTol)
        throw UndefinedDistribution("delta in the lower half plane");
    // reduce p * delta^(n) to pure delta derivatives, then integrate each
    std::vector<Expression> parts;
    Poly dm = p;
    double fact = 1.0;
    for (int m = 0; m <= dnode.n && !dm.empty(); ++m) {
        if (m > 0) fact *= double(m);
        cplx gm = peval(dm, -c);  // p^(m)(-c)/m! * m! handled via derivative polys
        cplx coeff = binom(dnode.n, m) * (m % 2 == 0 ? 1.0 : -1.0) * gm;
        if (std::abs(coeff) > 1e-300) {
            Node rest(dnode);
            rest.n = dnode.n - m;
            parts.push_back(product({constant(coeff), anti_delta_node(rest)}));
        }
        dm = pderiv(dm);
    }
    (void)fact;
    return sum(std::move(parts));
}

}  // namespace

Expression antiderivative(const Expression& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const: return linear(n.cval, 0.0);
        case Kind::Lin:
            return product({constant(1.0 / (2.0 * n.arg.alpha)), powi(e, 2)});
        case Kind::Sum: {
            std::vector<Expression> parts;
            for (const auto& k : n.kids) parts.push_back(antiderivative(k));
            return sum(std::move(parts));
        }
        case Kind::Exp: return product({constant(1.0 / n.arg.alpha), exp_of(n.arg)});
        case Kind::Sin: return product({constant(-1.0 / n.arg.alpha), cos_of(n.arg)});
        case Kind::Cos: return product({constant(1.0 / n.arg.alpha), sin_of(n.arg)});
        case Kind::Log:
        case Kind::LogAbs: {
            // (x + c/alpha) L(u) - x
            Expression L(std::make_shared<const Node>(n));
            return sum({product({linear(1.0, n.arg.c / n.arg.alpha), L}),
                        product({constant(-1.0), variable()})});
        }
        case Kind::Gauss:
            throw NoClosedForm("antiderivative of a Gaussian");
        case Kind::Theta:
            return anti_poly_times_theta(Poly{cplx(1.0, 0.0)}, n);
        case Kind::Delta: return anti_delta_node(n);
        case Kind::PV:
            if (n.n == 1) return log_or_logabs(n.arg);
            return product({constant(-1.0 / double(n.n - 1)), pv_of(n.n - 1, n.arg)});
        case Kind::Pow: {
            const Node& b = n.kids[0].node();
            if (b.kind == Kind::Lin) {
                if (n.n == -1)
                    return product({constant(1.0 / b.arg.alpha), log_or_logabs(b.arg)});
                return product({constant(1.0 / (b.arg.alpha * double(n.n + 1))),
                                powi(n.kids[0], n.n + 1)});
            }
            if (auto p = poly_coeffs(e)) return poly_to_expr(pinteg(*p));
            throw NoClosedForm("antiderivative of " + to_string(e));
        }
        case Kind::Prod: {
            // split into polynomial part x special factor
            Poly p{cplx(1.0, 0.0)};
            std::vector<const Node*> specials;
            std::vector<Affine> exp_args;  // Exp factors merge by adding args
            for (const auto& k : n.kids) {
                if (auto pk = poly_coeffs(k)) {
                    p = pmul(p, *pk);
                } else if (k.node().kind == Kind::Exp) {
                    exp_args.push_back(k.node().arg);
                } else {
                    specials.push_back(&k.node());
                }
            }
            std::optional<Affine> ea;
            if (!exp_args.empty()) {
                Affine a = exp_args[0];
                for (std::size_t i = 1; i < exp_args.size(); ++i) {
                    a.alpha += exp_args[i].alpha;
                    a.c += exp_args[i].c;
                }
                ea = a;
            }
            if (p.empty()) return constant(0.0);
            if (specials.empty() && !ea) return poly_to_expr(pinteg(p));
            if (specials.empty() && ea) {
                if (ea->alpha == cplx(0.0, 0.0)) {
                    Poly q = p;
                    for (auto& v : q) v *= std::exp(ea->c);
                    return poly_to_expr(pinteg(q));
                }
                return anti_poly_times_exp(p, *ea);
            }
            // trig factors are half-sums of exponentials, so a leftover Exp
            // factor just shifts their (complex) slopes
            if (specials.size() == 1 && ea &&
                (specials[0]->kind == Kind::Sin || specials[0]->kind == Kind::Cos)) {
                const Node& s = *specials[0];
                const cplx I(0.0, 1.0);
                auto anti_poly_exp = [](Poly q, const Affine& a) -> Expression {
                    if (std::abs(a.alpha) < 1e-300) {
                        for (auto& v : q) v *= std::exp(a.c);
                        return poly_to_expr(pinteg(q));
                    }
                    return anti_poly_times_exp(q, a);
                };
                Affine ap{I * s.arg.alpha + ea->alpha, I * s.arg.c + ea->c};
                Affine am{-I * s.arg.alpha + ea->alpha, -I * s.arg.c + ea->c};
                const cplx den = s.kind == Kind::Sin ? 2.0 * I : cplx(2.0, 0.0);
                Poly plus = p, minus = p;
                for (auto& v : plus) v /= den;
                for (auto& v : minus) v = (s.kind == Kind::Sin ? -v : v) / den;
                return sum({anti_poly_exp(plus, ap), anti_poly_exp(minus, am)});
            }
            if (specials.size() == 1 && !ea) {
                const Node& s = *specials[0];
                switch (s.kind) {
                    case Kind::Sin: {
                        const cplx I(0.0, 1.0);
                        Affine ap{I * s.arg.alpha, I * s.arg.c};
                        Affine am{-I * s.arg.alpha, -I * s.arg.c};
                        Poly half = p;
                        for (auto& v : half) v /= 2.0 * I;
                        Poly neghalf = half;
                        for (auto& v : neghalf) v = -v;
                        return sum({anti_poly_times_exp(half, ap),
                                    anti_poly_times_exp(neghalf, am)});
                    }
                    case Kind::Cos: {
                        const cplx I(0.0, 1.0);
                        Affine ap{I * s.arg.alpha, I * s.arg.c};
                        Affine am{-I * s.arg.alpha, -I * s.arg.c};
                        Poly half = p;
                        for (auto& v : half) v /= 2.0;
                        return sum({anti_poly_times_exp(half, ap),
                                    anti_poly_times_exp(half, am)});
                    }
                    case Kind::Theta: return anti_poly_times_theta(p, s);
                    case Kind::Delta: return anti_poly_times_delta(p, s);
                    case Kind::PV: return anti_poly_times_pv(p, s.n, s.arg);
                    case Kind::Log:
                    case Kind::LogAbs: return anti_poly_times_log(p, s);
                    default: break;
                }
            }
            throw NoClosedForm("antiderivative of " + to_string(e));
        }
    }
    throw NoClosedForm("antiderivative of " + to_string(e));
}

// ------------------------------------------------------------ delta erasure

Expression erase_upper_half_deltas(const Expression& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Delta:
            if (n.arg.c.imag() > kTol) return constant(0.0);
            if (n.arg.c.imag() < -kTol)
                throw UndefinedDistribution("delta in the lower half plane");
            return e;
        case Kind::Sum:
        case Kind::Prod:
        case Kind::Pow: {
            Node m(n);
            for (auto& k : m.kids) k = erase_upper_half_deltas(k);
            if (m.kind == Kind::Sum) return sum(std::move(m.kids));
            if (m.kind == Kind::Prod) return product(std::move(m.kids));
            return powi(m.kids[0], m.n);
        }
        default: return e;
    }
}

// ---------------------------------------------------------------- printing

std::string format_complex(cplx v) {
    std::ostringstream os;
    os.precision(12);
    auto num = [&](double d) {
        std::ostringstream t;
        t.precision(12);
        t << d;
        return t.str();
    };
    if (v.imag() == 0.0) return num(v.real());
    std::string im;
    if (v.imag() == 1.0)
        im = "i";
    else if (v.imag() == -1.0)
        im = "-i";
    else
        im = num(v.imag()) + "i";
    if (v.real() == 0.0) return im;
    return "(" + num(v.real()) + (v.imag() > 0.0 ? "+" : "") + im + ")";
}

namespace {

std::string affine_str(const Affine& a) {
    if (a.alpha == cplx(0.0, 0.0)) return format_complex(a.c);
    std::string s;
    if (a.alpha == cplx(1.0, 0.0))
        s = "x";
    else if (a.alpha == cplx(-1.0, 0.0))
        s = "-x";
    else
        s = format_complex(a.alpha) + "*x";
    if (a.c != cplx(0.0, 0.0)) {
        std::string cs = format_complex(a.c);
        if (!cs.empty() && (cs[0] == '-' || cs[0] == '('))
            s += (cs[0] == '-' ? "" : "+") + cs;
        else
            s += "+" + cs;
    }
    return s;
}

std::string render(const Expression& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Const: return format_complex(n.cval);
        case Kind::Lin: return affine_str(n.arg);
        case Kind::Sum: {
            std::string s;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) s += " + ";
                s += render(n.kids[i]);
            }
            return s;
        }
        case Kind::Prod: {
            std::string s;
            for (std::size_t i = 0; i < n.kids.size(); ++i) {
                if (i) s += "*";
                const Node& k = n.kids[i].node();
                bool paren = k.kind == Kind::Sum || k.kind == Kind::Lin;
                s += paren ? "(" + render(n.kids[i]) + ")" : render(n.kids[i]);
            }
            return s;
        }
        case Kind::Pow: {
            const Node& k = n.kids[0].node();
            bool paren = k.kind != Kind::Const || k.cval.imag() != 0.0;
            std::string b = render(n.kids[0]);
            return (paren ? "(" + b + ")" : b) + "^" + std::to_string(n.n);
        }
        case Kind::Exp: return "exp(" + affine_str(n.arg) + ")";
        case Kind::Sin: return "sin(" + affine_str(n.arg) + ")";
        case Kind::Cos: return "cos(" + affine_str(n.arg) + ")";
        case Kind::Log: return "log(" + affine_str(n.arg) + ")";
        case Kind::LogAbs: return "log|" + affine_str(n.arg) + "|";
        case Kind::Gauss: {
            std::ostringstream os;
            os.precision(12);
            os << "gaussw(" << n.width << "; " << affine_str(n.arg) << ")";
            return os.str();
        }
        case Kind::Theta: return "theta(" + affine_str(n.arg) + ")";
        case Kind::Delta:
            if (n.n == 0) return "delta(" + affine_str(n.arg) + ")";
            return "delta^(" + std::to_string(n.n) + ")(" + affine_str(n.arg) + ")";
        case Kind::PV:
            if (n.n == 1) return "pp(1/(" + affine_str(n.arg) + "))";
            return "pp(1/(" + affine_str(n.arg) + ")^" + std::to_string(n.n) + ")";
    }
    return "?";
}

}  // namespace

std::string to_string(const Expression& e) { return render(e); }

}  // namespace opcalc
