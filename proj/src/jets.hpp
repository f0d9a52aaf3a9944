#pragma once

// Internal helpers: dense truncated Taylor arithmetic over complex
// coefficients.  A "jet" of length N+1 holds Taylor coefficients
// a_k = f^(k)(x0)/k! of some function about a fixed base point.
// Everything here is exact arithmetic on truncations: the result of an
// operation on jets of length L is the jet (of length L) of the result.

#include <complex>
#include <vector>

#include "opcalc/errors.hpp"

namespace opcalc::jets {

using cplx = std::complex<double>;
using Jet = std::vector<cplx>;

inline Jet jconst(cplx v, std::size_t len) {
    Jet r(len, cplx(0.0, 0.0));
    if (len > 0) r[0] = v;
    return r;
}

inline Jet jadd(const Jet& a, const Jet& b) {
    std::size_t len = std::min(a.size(), b.size());
    Jet r(len);
    for (std::size_t k = 0; k < len; ++k) r[k] = a[k] + b[k];
    return r;
}

inline Jet jscale(const Jet& a, cplx s) {
    Jet r(a);
    for (auto& v : r) v *= s;
    return r;
}

inline Jet jmul(const Jet& a, const Jet& b) {
    std::size_t len = std::min(a.size(), b.size());
    Jet r(len, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < len; ++i) {
        if (a[i] == cplx(0.0, 0.0)) continue;
        for (std::size_t j = 0; i + j < len; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

// exp(h) for a jet h.  Standard recurrence: with g = exp(h),
//   g_0 = exp(h_0),  n g_n = sum_{k=1..n} k h_k g_{n-k}.
inline Jet jexp(const Jet& h) {
    Jet g(h.size(), cplx(0.0, 0.0));
    if (h.empty()) return g;
    g[0] = std::exp(h[0]);
    for (std::size_t n = 1; n < h.size(); ++n) {
        cplx acc(0.0, 0.0);
        for (std::size_t k = 1; k <= n; ++k) acc += double(k) * h[k] * g[n - k];
        g[n] = acc / double(n);
    }
    return g;
}

// 1/w for a jet w with w_0 != 0.
inline Jet jrecip(const Jet& w, const char* who) {
    if (w.empty() || std::abs(w[0]) < 1e-300)
        throw PoleAtPoint(std::string(who) + ": reciprocal of value 0");
    Jet r(w.size(), cplx(0.0, 0.0));
    r[0] = 1.0 / w[0];
    for (std::size_t n = 1; n < w.size(); ++n) {
        cplx acc(0.0, 0.0);
        for (std::size_t k = 1; k <= n; ++k) acc += w[k] * r[n - k];
        r[n] = -acc / w[0];
    }
    return r;
}

// log(w), principal branch, w_0 != 0.  (log w)' = w'/w.
inline Jet jlog(const Jet& w, const char* who) {
    if (w.empty() || std::abs(w[0]) < 1e-300)
        throw PoleAtPoint(std::string(who) + ": log of value 0");
    Jet d(w.size(), cplx(0.0, 0.0));  // derivative coefficients of log w
    Jet rec = jrecip(w, who);
    // w' as a jet of the same length (top coefficient garbage-free: shift).
    Jet wp(w.size(), cplx(0.0, 0.0));
    for (std::size_t k = 0; k + 1 < w.size(); ++k) wp[k] = double(k + 1) * w[k + 1];
    Jet prod = jmul(wp, rec);
    d[0] = std::log(w[0]);
    for (std::size_t n = 1; n < w.size(); ++n) d[n] = prod[n - 1] / double(n);
    return d;
}

inline Jet jsin(const Jet& h) {
    // sin(h) = (e^{ih} - e^{-ih}) / (2i)
    const cplx I(0.0, 1.0);
    Jet a = jexp(jscale(h, I));
    Jet b = jexp(jscale(h, -I));
    Jet r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = (a[k] - b[k]) / (2.0 * I);
    return r;
}

inline Jet jcos(const Jet& h) {
    const cplx I(0.0, 1.0);
    Jet a = jexp(jscale(h, I));
    Jet b = jexp(jscale(h, -I));
    Jet r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = (a[k] + b[k]) / 2.0;
    return r;
}

// w^k for integer k (negative allowed when w_0 != 0).
inline Jet jpowi(const Jet& w, int k, const char* who) {
    if (k == 0) return jconst(cplx(1.0, 0.0), w.size());
    Jet base = k > 0 ? w : jrecip(w, who);
    int reps = k > 0 ? k : -k;
    Jet acc = jconst(cplx(1.0, 0.0), w.size());
    for (int i = 0; i < reps; ++i) acc = jmul(acc, base);
    return acc;
}

}  // namespace opcalc::jets
