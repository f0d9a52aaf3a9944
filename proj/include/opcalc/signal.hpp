#pragma once

// Gaussian blur and derivative-series deblur of uniformly sampled signals.
//
// The blur kernel is the normal density with variance 1/a.  Its inverse,
// expanded in derivative operators, is
//     sum_n (-1/(2a))^n / n! * D^(2n),
// truncated after K terms and discretised with centered finite-difference
// stencils of even accuracy order p.  The truncated inverse amplifies
// sample roundoff by roughly sum_n ((2/dx)^2/(2a))^n / n!, which for fine
// grids reaches tens of decimal digits; the pipeline therefore carries
// 50-digit floating point end to end (including CSV round trips).
//
// Boundary handling everywhere is recursive odd reflection about the two
// edge samples; it keeps affine trends exact and is diagonal in the sine
// basis, which the deconvolve_oracle exploits.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <string>
#include <vector>

#include "opcalc/power_series.hpp"

namespace opcalc {

using real_t = boost::multiprecision::cpp_bin_float_50;

struct SampledSignal {
    real_t x0{0};
    real_t dx{0};
    std::vector<real_t> values;
    std::size_t size() const { return values.size(); }
    real_t x_at(std::size_t i) const { return x0 + dx * real_t(int(i)); }
};

// normalized trapezoid taps of the width-sqrt(1/a) Gaussian on the grid;
// symmetric, radius chosen so the dropped tail is below 1e-55
std::vector<real_t> blur_kernel_weights(double a, const real_t& dx);

// convolution with the kernel above (odd-reflection boundary).  Throws
// KernelWiderThanDomain when sqrt(1/a) exceeds a quarter of the domain.
SampledSignal blur(const SampledSignal& s, double a);

struct DeblurOperator {
    double a = 0.0;
    int terms = 0;              // K: highest D^(2n) term index
    int accuracy = 0;           // p: finite-difference accuracy order (even)
    std::vector<real_t> d;      // d[n] multiplies D^(2n)
};

// closed-form coefficients d_n = (-+ 1/(2a))^n / n!; flip_sign = true builds
// the forward (re-blurring) operator instead of the inverse.
DeblurOperator build_deblur_operator(double a, int K, int p, bool flip_sign = false);

// same operator from the Maclaurin series of the kernel transform
// (reciprocal, then y -> iD); the two constructions agree to roundoff.
DeblurOperator deblur_operator_from_series(const PowerSeries& transform_series,
                                           double a, int K, int p);

// applies the operator with centered stencils (odd-reflection boundary).
// Throws GridTooCoarse when the widest stencil spans more than half the
// signal.
SampledSignal deblur(const SampledSignal& s, const DeblurOperator& op);

// centered finite-difference weights for the m-th derivative on unit-spaced
// offsets -hw..hw (scale by dx^-m for a real grid)
std::vector<real_t> fd_weights(int deriv_order, int halfwidth);

// worst-case roundoff amplification factor of the operator on a grid
double noise_gain(const DeblurOperator& op, const real_t& dx);

// Independent frequency-domain inverse of the discrete blur: the odd
// reflection makes the convolution diagonal in the sine basis, so each mode
// is divided by its exact transfer value.  Modes whose transfer is below
// 1e-40 are projected out (their true content is below roundoff for
// band-limited inputs), so the result is exact for signals supported on the
// surviving modes.
SampledSignal deconvolve_oracle(const SampledSignal& blurred, double a);

// exact sine-basis transfer value of the discrete blur at mode m
real_t blur_mode_transfer(double a, const real_t& dx, std::size_t n_samples, int mode);

// CSV with header "x,value"; 52 significant digits on write; read enforces
// uniform spacing to 1e-9 relative.
SampledSignal read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const SampledSignal& s);

}  // namespace opcalc
