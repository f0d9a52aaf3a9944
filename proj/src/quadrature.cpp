#include "opcalc/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <stdexcept>
#include <string>

namespace opcalc {

namespace {

struct DisableHandler {
    DisableHandler() { gsl_set_error_handler_off(); }
};

double call_thunk(double x, void* p) { return (*static_cast<const RealFn*>(p))(x); }

gsl_function wrap(const RealFn& f) {
    static DisableHandler once;
    gsl_function g;
    g.function = &call_thunk;
    g.params = const_cast<RealFn*>(&f);
    return g;
}

[[noreturn]] void fail(const char* who, int status) {
    throw std::runtime_error(std::string(who) + " failed: " + gsl_strerror(status));
}

using Workspace =
    std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)>;

Workspace make_ws(std::size_t limit = 4096) {
    return Workspace(gsl_integration_workspace_alloc(limit),
                     &gsl_integration_workspace_free);
}

}  // namespace

double quad_line(const RealFn& f, double epsabs, double epsrel) {
    auto ws = make_ws();
    gsl_function g = wrap(f);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qagi(&g, epsabs, epsrel, 4096, ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS) fail("qagi", status);
    return result;
}

double quad_upper(const RealFn& f, double a, double epsabs, double epsrel) {
    auto ws = make_ws();
    gsl_function g = wrap(f);
    double result = 0.0, abserr = 0.0;
    int status =
        gsl_integration_qagiu(&g, a, epsabs, epsrel, 4096, ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS) fail("qagiu", status);
    return result;
}

double quad_finite(const RealFn& f, double a, double b, double epsabs, double epsrel) {
    auto ws = make_ws();
    gsl_function g = wrap(f);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qags(&g, a, b, epsabs, epsrel, 4096, ws.get(), &result,
                                      &abserr);
    if (status != GSL_SUCCESS) fail("qags", status);
    return result;
}

namespace {

double fourier_tail(const RealFn& f, double a, double omega, double epsabs,
                    gsl_integration_qawo_enum kind) {
    auto ws = make_ws();
    auto cyc = make_ws();
    gsl_integration_qawo_table* table =
        gsl_integration_qawo_table_alloc(omega, 1.0, kind, 64);
    if (!table) throw std::runtime_error("qawo table allocation failed");
    gsl_function g = wrap(f);
    double result = 0.0, abserr = 0.0;
    int status = gsl_integration_qawf(&g, a, epsabs, 4096, ws.get(), cyc.get(), table,
                                      &result, &abserr);
    gsl_integration_qawo_table_free(table);
    if (status != GSL_SUCCESS) fail("qawf", status);
    return result;
}

}  // namespace

double quad_fourier_sin(const RealFn& f, double a, double omega, double epsabs) {
    return fourier_tail(f, a, omega, epsabs, GSL_INTEG_SINE);
}

double quad_fourier_cos(const RealFn& f, double a, double omega, double epsabs) {
    return fourier_tail(f, a, omega, epsabs, GSL_INTEG_COSINE);
}

}  // namespace opcalc
