#pragma once

#include <stdexcept>
#include <string>

namespace opcalc {

// Base class for every engine-level failure.  Each concrete error carries a
// stable name() used by the CLI when reporting domain errors (exit code 2).
class EngineError : public std::runtime_error {
public:
    EngineError(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define OPCALC_DEFINE_ERROR(Name)                                     \
    class Name : public EngineError {                                 \
    public:                                                           \
        explicit Name(const std::string& what)                        \
            : EngineError(#Name, std::string(#Name) + ": " + what) {} \
    }

// Distributional objects evaluated/combined outside their domain of
// definition (delta at a point with negative imaginary part, step function
// at a non-real point, products of two distributions, ...).
OPCALC_DEFINE_ERROR(UndefinedDistribution);

// Evaluation landed exactly on a pole of a reciprocal / principal-value
// factor or of log at its branch point.
OPCALC_DEFINE_ERROR(PoleAtPoint);

// A symbolic operation has no result inside the closed expression family
// (e.g. antiderivative of a Gaussian, heat flow on a step function).
OPCALC_DEFINE_ERROR(NoClosedForm);

// Reciprocal of a power series whose constant term vanishes.
OPCALC_DEFINE_ERROR(ZeroConstantTerm);

// Composition f(g) of power series where g has a nonzero constant term.
OPCALC_DEFINE_ERROR(ComposeNonzeroConstant);

// A Taylor expansion was requested at a point where the expression is not
// smooth (on the singular support of a delta / step / principal value).
OPCALC_DEFINE_ERROR(NotSmoothAtOrigin);

// The expression cannot be turned into an operator: no exact
// exponential-polynomial-Gaussian decomposition and no convergent series.
OPCALC_DEFINE_ERROR(UnliftableExpression);

// Backward heat flow applied to something it cannot regularize
// (net negative Gaussian variance, bare delta under inverse heat).
OPCALC_DEFINE_ERROR(HeatRuleViolation);

// The shifted-delta transform needs a finite combination of exponentials
// times polynomials and got something else.
OPCALC_DEFINE_ERROR(NotExponentialPolynomial);

// The requested integral does not exist as a finite number (delta sitting
// on the evaluation point, undamped non-oscillatory integrand, ...).
OPCALC_DEFINE_ERROR(DivergentIntegral);

// Signal-processing failures.
OPCALC_DEFINE_ERROR(KernelWiderThanDomain);
OPCALC_DEFINE_ERROR(GridTooCoarse);

// The polynomial kernel of the strong-coupling series was truncated before
// reaching the requested resolution.
OPCALC_DEFINE_ERROR(PSeriesUnderResolved);

// Text input (expression grammar, CSV files) failed to parse.
OPCALC_DEFINE_ERROR(ParseError);

#undef OPCALC_DEFINE_ERROR

}  // namespace opcalc
