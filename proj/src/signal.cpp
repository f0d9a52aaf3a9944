#include "opcalc/signal.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "opcalc/errors.hpp"

namespace opcalc {

namespace {

constexpr double kTailDigits = 55.0;  // kernel truncated when below 1e-55

real_t pad_value(const std::vector<real_t>& f, long long i, int depth = 0) {
    if (depth > 64)
        throw KernelWiderThanDomain("boundary reflection recursed too deep");
    long long n = (long long)f.size();
    if (i >= 0 && i < n) return f[std::size_t(i)];
    if (i < 0) return 2 * f[0] - pad_value(f, -i, depth + 1);
    return 2 * f[std::size_t(n - 1)] - pad_value(f, 2 * (n - 1) - i, depth + 1);
}

void check_signal(const SampledSignal& s) {
    if (s.size() < 8) throw std::invalid_argument("signal needs at least 8 samples");
    if (!(s.dx > 0)) throw std::invalid_argument("signal spacing must be positive");
}

}  // namespace

std::vector<real_t> blur_kernel_weights(double a, const real_t& dx) {
    if (!(a > 0.0)) throw std::invalid_argument("blur needs a > 0");
    double radius = std::sqrt(2.0 * std::log(10.0) * kTailDigits / a);
    long long hw = (long long)std::ceil(radius / dx.convert_to<double>());
    if (hw < 1) hw = 1;
    std::vector<real_t> w(std::size_t(2 * hw + 1));
    real_t half_a(a);
    half_a /= 2;
    for (long long j = -hw; j <= hw; ++j) {
        real_t u = dx * real_t(j);
        real_t v = exp(-half_a * u * u);
        if (j == -hw || j == hw) v /= 2;  // trapezoid ends
        w[std::size_t(j + hw)] = v;
    }
    real_t total = 0;
    for (const auto& v : w) total += v;
    for (auto& v : w) v /= total;
    return w;
}

SampledSignal blur(const SampledSignal& s, double a) {
    check_signal(s);
    real_t length = s.dx * real_t(int(s.size() - 1));
    if (std::sqrt(1.0 / a) > length.convert_to<double>() / 4.0)
        throw KernelWiderThanDomain("kernel width sqrt(1/a) exceeds a quarter of the domain");
    std::vector<real_t> w = blur_kernel_weights(a, s.dx);
    long long hw = (long long)(w.size() / 2);
    SampledSignal out;
    out.x0 = s.x0;
    out.dx = s.dx;
    out.values.resize(s.size());
    for (long long i = 0; i < (long long)s.size(); ++i) {
        real_t acc = 0;
        for (long long j = -hw; j <= hw; ++j)
            acc += w[std::size_t(j + hw)] * pad_value(s.values, i + j);
        out.values[std::size_t(i)] = acc;
    }
    return out;
}

DeblurOperator build_deblur_operator(double a, int K, int p, bool flip_sign) {
    if (!(a > 0.0)) throw std::invalid_argument("deblur needs a > 0");
    if (K < 0) throw std::invalid_argument("K must be >= 0");
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("accuracy order p must be even >= 2");
    DeblurOperator op;
    op.a = a;
    op.terms = K;
    op.accuracy = p;
    op.d.resize(std::size_t(K) + 1);
    real_t step = real_t(1) / (2 * real_t(a));
    if (!flip_sign) step = -step;
    real_t cur = 1;
    op.d[0] = cur;
    for (int n = 1; n <= K; ++n) {
        cur *= step / n;
        op.d[std::size_t(n)] = cur;
    }
    return op;
}

DeblurOperator deblur_operator_from_series(const PowerSeries& transform_series,
                                           double a, int K, int p) {
    if (transform_series.order() < 2 * K)
        throw std::invalid_argument("series too short for the requested K");
    PowerSeries recip = ps_reciprocal(transform_series);
    DeblurOperator op;
    op.a = a;
    op.terms = K;
    op.accuracy = p;
    op.d.resize(std::size_t(K) + 1);
    for (int n = 0; n <= K; ++n) {
        cplx c = recip.c[std::size_t(2 * n)];
        // substitute y = iD: coefficient of D^(2n) picks up i^(2n) = (-1)^n
        cplx dn = c * (n % 2 == 0 ? 1.0 : -1.0);
        cplx odd = recip.coeff(2 * n + 1);
        if (std::abs(odd) > 1e-10 || std::abs(dn.imag()) > 1e-10 * (1.0 + std::abs(dn)))
            throw std::invalid_argument("transform series is not even and real");
        op.d[std::size_t(n)] = real_t(dn.real());
    }
    return op;
}

std::vector<real_t> fd_weights(int m, int hw) {
    if (m < 0 || hw < 0) throw std::invalid_argument("bad stencil request");
    int n = 2 * hw + 1;
    if (m > n - 1) throw std::invalid_argument("stencil too small for derivative order");
    std::vector<real_t> xs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) xs[std::size_t(j)] = real_t(j - hw);
    // Fornberg's recursion for weights of the m-th derivative at 0
    auto at = [n](std::vector<real_t>& v, int k, int i, int j) -> real_t& {
        return v[std::size_t((k * n + i) * n + j)];
    };
    std::vector<real_t> d(std::size_t((m + 1) * n * n), real_t(0));
    at(d, 0, 0, 0) = 1;
    real_t c1 = 1;
    for (int i = 1; i < n; ++i) {
        real_t c2 = 1;
        int kmax = std::min(i, m);
        for (int j = 0; j < i; ++j) {
            real_t c3 = xs[std::size_t(i)] - xs[std::size_t(j)];
            c2 *= c3;
            for (int k = 0; k <= kmax; ++k) {
                real_t prev = at(d, k, i - 1, j);
                real_t lower = k > 0 ? at(d, k - 1, i - 1, j) : real_t(0);
                at(d, k, i, j) = (xs[std::size_t(i)] * prev - k * lower) / c3;
            }
        }
        for (int k = 0; k <= kmax; ++k) {
            real_t prev = at(d, k, i - 1, i - 1);
            real_t lower = k > 0 ? at(d, k - 1, i - 1, i - 1) : real_t(0);
            at(d, k, i, i) = c1 / c2 * (k * lower - xs[std::size_t(i - 1)] * prev);
        }
        c1 = c2;
    }
    std::vector<real_t> w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) w[std::size_t(j)] = at(d, m, n - 1, j);
    return w;
}

SampledSignal deblur(const SampledSignal& s, const DeblurOperator& op) {
    check_signal(s);
    SampledSignal out;
    out.x0 = s.x0;
    out.dx = s.dx;
    out.values = s.values;
    for (auto& v : out.values) v *= op.d[0];
    if (op.terms == 0) return out;
    int max_hw = op.terms + op.accuracy / 2 - 1;
    if (2 * max_hw + 1 > int(s.size()) / 2)
        throw GridTooCoarse("widest stencil spans more than half the signal");
    for (int n = 1; n <= op.terms; ++n) {
        int hw = n + op.accuracy / 2 - 1;
        std::vector<real_t> w = fd_weights(2 * n, hw);
        real_t scale = op.d[std::size_t(n)];
        real_t dxm = 1;
        for (int k = 0; k < 2 * n; ++k) dxm *= s.dx;
        scale /= dxm;
        for (long long i = 0; i < (long long)s.size(); ++i) {
            real_t acc = 0;
            for (long long j = -hw; j <= hw; ++j)
                acc += w[std::size_t(j + hw)] * pad_value(s.values, i + j);
            out.values[std::size_t(i)] += scale * acc;
        }
    }
    return out;
}

double noise_gain(const DeblurOperator& op, const real_t& dx) {
    real_t gain = abs(op.d[0]);
    for (int n = 1; n <= op.terms; ++n) {
        int hw = n + op.accuracy / 2 - 1;
        std::vector<real_t> w = fd_weights(2 * n, hw);
        real_t norm1 = 0;
        for (const auto& v : w) norm1 += abs(v);
        real_t dxm = 1;
        for (int k = 0; k < 2 * n; ++k) dxm *= dx;
        gain += abs(op.d[std::size_t(n)]) * norm1 / dxm;
    }
    return gain.convert_to<double>();
}

real_t blur_mode_transfer(double a, const real_t& dx, std::size_t n_samples, int mode) {
    std::vector<real_t> w = blur_kernel_weights(a, dx);
    long long hw = (long long)(w.size() / 2);
    long long M = (long long)n_samples - 1;
    const real_t pi = boost::math::constants::pi<real_t>();
    real_t lam = w[std::size_t(hw)];
    for (long long k = 1; k <= hw; ++k)
        lam += 2 * w[std::size_t(hw + k)] * cos(pi * mode * k / real_t(M));
    return lam;
}

SampledSignal deconvolve_oracle(const SampledSignal& blurred, double a) {
    check_signal(blurred);
    const std::size_t N = blurred.size();
    const long long M = (long long)N - 1;
    const real_t pi = boost::math::constants::pi<real_t>();

    // split off the affine trend through the end samples (blur-invariant)
    std::vector<real_t> y(N);
    real_t f0 = blurred.values[0];
    real_t slope = (blurred.values[N - 1] - f0) / real_t(M);
    for (std::size_t j = 0; j < N; ++j)
        y[j] = blurred.values[j] - (f0 + slope * real_t(int(j)));

    // sine table: sin(pi q / M) for q in [0, 2M)
    std::vector<real_t> table(std::size_t(2 * M));
    for (long long q = 0; q < 2 * M; ++q)
        table[std::size_t(q)] = sin(pi * q / real_t(M));

    // cosine table and kernel taps for the exact mode transfers
    std::vector<real_t> ctable(std::size_t(2 * M));
    for (long long q = 0; q < 2 * M; ++q)
        ctable[std::size_t(q)] = cos(pi * q / real_t(M));
    std::vector<real_t> w = blur_kernel_weights(a, blurred.dx);
    const long long hw = (long long)(w.size() / 2);

    const real_t floor_lambda = real_t("1e-40");
    std::vector<real_t> coeff(std::size_t(M), real_t(0));  // index m = 1..M-1
    for (long long m = 1; m < M; ++m) {
        real_t lam = w[std::size_t(hw)];
        for (long long k = 1; k <= hw; ++k)
            lam += 2 * w[std::size_t(hw + k)] * ctable[std::size_t((m * k) % (2 * M))];
        if (lam < floor_lambda) continue;  // content below roundoff: project out
        real_t s = 0;
        for (long long j = 1; j < M; ++j)
            s += y[std::size_t(j)] * table[std::size_t((m * j) % (2 * M))];
        coeff[std::size_t(m)] = s / lam;
    }

    SampledSignal out;
    out.x0 = blurred.x0;
    out.dx = blurred.dx;
    out.values.resize(N);
    for (long long j = 0; j < (long long)N; ++j) {
        real_t acc = 0;
        for (long long m = 1; m < M; ++m) {
            if (coeff[std::size_t(m)] == 0) continue;
            acc += coeff[std::size_t(m)] * table[std::size_t((m * j) % (2 * M))];
        }
        out.values[std::size_t(j)] =
            f0 + slope * real_t(int(j)) + acc * 2 / real_t(M);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

SampledSignal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,value")
        throw ParseError(path + ": expected header 'x,value'");
    std::vector<real_t> xs, vs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::size_t comma = t.find(',');
        if (comma == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'x,value'");
        try {
            xs.emplace_back(trim(t.substr(0, comma)));
            vs.emplace_back(trim(t.substr(comma + 1)));
        } catch (const std::exception& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": bad number: " +
                             e.what());
        }
    }
    if (xs.size() < 2) throw ParseError(path + ": need at least two samples");
    real_t dx0 = xs[1] - xs[0];
    if (!(dx0 > 0)) throw ParseError(path + ": x column must be strictly increasing");
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
        real_t d = xs[i + 1] - xs[i];
        if (abs(d - dx0) > real_t("1e-9") * abs(dx0))
            throw ParseError(path + ": x column is not uniformly spaced (row " +
                             std::to_string(i + 2) + ")");
    }
    SampledSignal s;
    s.x0 = xs[0];
    s.dx = (xs.back() - xs[0]) / real_t(int(xs.size()) - 1);
    s.values = std::move(vs);
    return s;
}

void write_signal_csv(const std::string& path, const SampledSignal& s) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << "x,value\n";
    out << std::setprecision(std::numeric_limits<real_t>::max_digits10);
    for (std::size_t i = 0; i < s.size(); ++i)
        out << s.x_at(i) << "," << s.values[i] << "\n";
    if (!out) throw ParseError("write to " + path + " failed");
}

}  // namespace opcalc
