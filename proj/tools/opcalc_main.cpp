// Command line front end: parses an expression, dispatches to the transform /
// signal / quartic modules, and emits text, JSON, or CSV.

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "opcalc/delta_rep.hpp"
#include "opcalc/errors.hpp"
#include "opcalc/expr.hpp"
#include "opcalc/parse.hpp"
#include "opcalc/quartic.hpp"
#include "opcalc/signal.hpp"
#include "opcalc/transforms.hpp"

using nlohmann::json;
using namespace opcalc;

namespace {

struct Sink {
    std::string format = "text";
    std::string out_path;

    void write(const std::string& doc) const {
        if (out_path.empty()) {
            std::cout << doc;
            if (!doc.empty() && doc.back() != '\n') std::cout << '\n';
            return;
        }
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open output file: " + out_path);
        os << doc;
        if (!doc.empty() && doc.back() != '\n') os << '\n';
    }
};

std::string fmt15(double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

bool nearly_real(cplx v) { return std::abs(v.imag()) <= 1e-10 * std::max(1.0, std::abs(v.real())); }

std::string fmt_scalar_text(cplx v) {
    if (nearly_real(v)) return fmt15(v.real());
    std::ostringstream os;
    os << fmt15(v.real()) << (v.imag() < 0 ? " - " : " + ") << fmt15(std::abs(v.imag())) << "*i";
    return os.str();
}

json scalar_json(cplx v) {
    if (nearly_real(v)) return json(v.real());
    return json::array({v.real(), v.imag()});
}

void attach_diagnostics(json& j, const TransformResult& r) {
    if (r.diagnostics.empty()) return;
    json d = json::object();
    for (const auto& [k, v] : r.diagnostics) d[k] = v;
    j["diagnostics"] = d;
}

int emit_transform(const Sink& sink, const TransformResult& r) {
    json j;
    j["method"] = r.method;
    std::string text;
    std::string csv;
    if (r.scalar) {
        j["result"] = scalar_json(*r.scalar);
        text = fmt_scalar_text(*r.scalar);
        csv = "method,result\n" + r.method + "," + fmt_scalar_text(*r.scalar) + "\n";
    } else if (r.closed_form) {
        const std::string s = to_string(*r.closed_form);
        j["result"] = s;
        text = s;
        csv = "method,result\n" + r.method + ",\"" + s + "\"\n";
    } else if (r.distribution) {
        const auto& d = *r.distribution;
        std::ostringstream ts;
        ts << "finite: " << fmt_scalar_text(d.finite);
        json deltas = json::array();
        std::ostringstream cs;
        cs << "coeff,order,argument\n";
        for (const auto& t : d.deltas) {
            ts << "\n" << fmt_scalar_text(t.coeff) << " * delta^(" << t.order << ") at argument "
               << fmt_scalar_text(t.location);
            deltas.push_back({{"coeff", scalar_json(t.coeff)},
                              {"order", t.order},
                              {"argument", scalar_json(t.location)}});
            cs << fmt_scalar_text(t.coeff) << "," << t.order << "," << fmt_scalar_text(t.location)
               << "\n";
        }
        j["finite"] = scalar_json(d.finite);
        j["deltas"] = deltas;
        text = ts.str();
        csv = cs.str();
    }
    for (const auto& [k, v] : r.diagnostics) text += "\n" + k + ": " + fmt15(v);
    attach_diagnostics(j, r);
    if (sink.format == "json")
        sink.write(j.dump(2));
    else if (sink.format == "csv")
        sink.write(csv);
    else
        sink.write(text);
    return 0;
}

int emit_signal(const Sink& sink, const SampledSignal& s) {
    if (sink.format == "json") {
        json j;
        j["x0"] = double(s.x0);
        j["dx"] = double(s.dx);
        json vals = json::array();
        for (const auto& v : s.values) vals.push_back(double(v));
        j["values"] = vals;
        sink.write(j.dump(2));
        return 0;
    }
    // text and csv both use the canonical signal CSV (full precision)
    std::ostringstream os;
    os << "x,value\n" << std::setprecision(std::numeric_limits<real_t>::max_digits10);
    for (std::size_t i = 0; i < s.size(); ++i) os << s.x_at(i) << "," << s.values[i] << "\n";
    sink.write(os.str());
    return 0;
}

int emit_series(const Sink& sink, const SeriesReport& r) {
    if (sink.format == "json") {
        json j;
        j["model"] = {{"a", r.model.a}, {"lambda", r.model.lambda}, {"j", r.model.j}};
        j["method"] = r.method;
        j["terms"] = r.terms;
        j["partial_sums"] = r.partial_sums;
        j["oracle"] = r.oracle;
        j["errors"] = r.abs_errors;
        sink.write(j.dump(2));
        return 0;
    }
    if (sink.format == "csv") {
        std::ostringstream os;
        os << "order,term,partial_sum,abs_error\n" << std::setprecision(17);
        for (std::size_t k = 0; k < r.terms.size(); ++k)
            os << k << "," << r.terms[k] << "," << r.partial_sums[k] << "," << r.abs_errors[k]
               << "\n";
        sink.write(os.str());
        return 0;
    }
    std::ostringstream os;
    os << "method: " << r.method << "\noracle: " << fmt15(r.oracle) << "\n";
    for (std::size_t k = 0; k < r.terms.size(); ++k)
        os << "k=" << std::setw(3) << k << "  term=" << std::setw(24) << fmt15(r.terms[k])
           << "  partial=" << std::setw(24) << fmt15(r.partial_sums[k])
           << "  abs_err=" << fmt15(r.abs_errors[k]) << "\n";
    os << "best partial sum at k=" << r.best_index
       << " (abs error " << fmt15(r.abs_errors[size_t(r.best_index)]) << ")\n"
       << "smallest |term| at k=" << r.min_term_index << "\n";
    sink.write(os.str());
    return 0;
}

int emit_error(const Sink& sink, const std::string& name, const std::string& message) {
    if (sink.format == "json") {
        json j;
        j["error"] = name;
        j["message"] = message;
        sink.write(j.dump(2));
    } else if (sink.format == "csv") {
        sink.write("error,message\n" + name + ",\"" + message + "\"\n");
    } else {
        sink.write("error: " + message);
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-calculus transforms, signal deblurring, and quartic-model series"};
    app.require_subcommand(1);

    std::string expr_text;
    std::string in_path, out_path, format = "text";
    double a = 0.0, b = 0.0, sigma = 0.0, lambda = 1.0, jsrc = 0.0, probe = 0.0;
    int order = 0, pterms = 64, stencil = 8;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        cmd->add_option("--out", out_path, "write the result document to FILE");
    };
    auto add_expr = [&](CLI::App* cmd, bool required = true) {
        auto* o = cmd->add_option("expr", expr_text, "expression in x");
        if (required) o->required();
    };

    auto* c_fourier = app.add_subcommand("fourier", "Fourier transform via the delta kernel");
    add_expr(c_fourier);
    c_fourier->add_option("--sigma", sigma, "Gaussian regularization width (0 = bare kernel)");
    add_common(c_fourier);

    auto* c_fourier2 = app.add_subcommand("fourier2", "Fourier transform via the shifted delta of a derivative");
    add_expr(c_fourier2);
    c_fourier2->add_option("--b", b, "frequency at which to evaluate")->required();
    c_fourier2->add_option("--probe", probe, "probe point x (result is probe independent)");
    add_common(c_fourier2);

    auto* c_integrate = app.add_subcommand("integrate", "integral over the whole line");
    add_expr(c_integrate);
    auto* sigma_opt = c_integrate->add_option(
        "--sigma", sigma, "use the Gaussian-damped route (0 = damped route in its limit form)");
    add_common(c_integrate);

    auto* c_halfline = app.add_subcommand("halfline", "integral over [a, infinity)");
    add_expr(c_halfline);
    c_halfline->add_option("--a", a, "lower endpoint (default 0)");
    add_common(c_halfline);

    auto* c_laplace = app.add_subcommand("laplace", "integral of f(x) exp(-a x) over [0, infinity)");
    add_expr(c_laplace);
    c_laplace->add_option("--a", a, "decay rate, a > 0")->required();
    add_common(c_laplace);

    auto* c_interval = app.add_subcommand("interval", "integral over [a, b]");
    add_expr(c_interval);
    c_interval->add_option("--a", a, "lower endpoint")->required();
    c_interval->add_option("--b", b, "upper endpoint")->required();
    add_common(c_interval);

    auto* c_anti = app.add_subcommand("antideriv", "antiderivative F with F(0) = 0, evaluated at the probe point");
    add_expr(c_anti);
    c_anti->add_option("--probe", probe, "evaluation point x");
    add_common(c_anti);

    auto* c_delta = app.add_subcommand("delta-approx", "truncated delta representation value");
    add_expr(c_delta, false);
    c_delta->add_option("--order", order, "number of operator corrections N (default 0)");
    c_delta->add_option("--probe", probe, "evaluation point x");
    add_common(c_delta);

    auto* c_blur = app.add_subcommand("blur", "Gaussian blur of a sampled signal");
    c_blur->add_option("--in", in_path, "input signal CSV")->required();
    c_blur->add_option("--a", a, "kernel parameter, kernel exp(-a u^2 / 2)")->required();
    add_common(c_blur);

    auto* c_deblur = app.add_subcommand("deblur", "truncated-series deblur of a sampled signal");
    c_deblur->add_option("--in", in_path, "input signal CSV")->required();
    c_deblur->add_option("--a", a, "kernel parameter of the blur being undone")->required();
    c_deblur->add_option("--order", order, "series truncation K")->required();
    c_deblur->add_option("--stencil", stencil, "finite-difference accuracy order p (default 8)");
    add_common(c_deblur);

    auto* c_qw = app.add_subcommand("qft-weak", "weak-coupling series of the quartic model");
    c_qw->add_option("--a", a, "quadratic coefficient")->required();
    c_qw->add_option("--lambda", lambda, "quartic coefficient")->required();
    c_qw->add_option("--j", jsrc, "source term");
    c_qw->add_option("--order", order, "truncation order K")->required();
    add_common(c_qw);

    auto* c_qs = app.add_subcommand("qft-strong", "strong-coupling series of the quartic model");
    c_qs->add_option("--a", a, "quadratic coefficient")->required();
    c_qs->add_option("--lambda", lambda, "quartic coefficient")->required();
    c_qs->add_option("--j", jsrc, "source term");
    c_qs->add_option("--order", order, "truncation order K")->required();
    c_qs->add_option("--pterms", pterms, "kernel series depth M (default 64)");
    add_common(c_qs);

    auto* c_qo = app.add_subcommand("qft-oracle", "direct quadrature of the quartic model");
    c_qo->add_option("--a", a, "quadratic coefficient")->required();
    c_qo->add_option("--lambda", lambda, "quartic coefficient")->required();
    c_qo->add_option("--j", jsrc, "source term");
    add_common(c_qo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // --help/--version exit 0; usage errors exit 1
    }

    Sink sink;
    sink.format = format;
    sink.out_path = out_path;

    try {
        if (c_fourier->parsed())
            return emit_transform(sink, fourier_via_delta(parse_expression(expr_text), sigma));
        if (c_fourier2->parsed())
            return emit_transform(
                sink, fourier_via_shifted_delta(parse_expression(expr_text), cplx(b, 0.0), probe));
        if (c_integrate->parsed()) {
            Expression f = parse_expression(expr_text);
            if (sigma_opt->count() > 0)
                return emit_transform(sink, integrate_line_regularized(f, sigma));
            return emit_transform(sink, integrate_line(f));
        }
        if (c_halfline->parsed())
            return emit_transform(sink, integrate_halfline(parse_expression(expr_text), a));
        if (c_laplace->parsed())
            return emit_transform(sink, laplace_transform(parse_expression(expr_text), a));
        if (c_interval->parsed())
            return emit_transform(sink, integrate_interval(parse_expression(expr_text), a, b));
        if (c_anti->parsed()) {
            Expression f = parse_expression(expr_text);
            TransformResult r = antiderivative_value(f, probe);
            json extra;
            try {
                Expression F = antiderivative(f);
                extra = to_string(F);
            } catch (const EngineError&) {
            }
            if (sink.format == "json") {
                json j;
                j["method"] = r.method;
                j["result"] = scalar_json(*r.scalar);
                if (!extra.is_null()) j["formula"] = extra;
                sink.write(j.dump(2));
                return 0;
            }
            std::string text = fmt_scalar_text(*r.scalar);
            if (!extra.is_null() && sink.format == "text")
                text += "\nformula: " + extra.get<std::string>();
            if (sink.format == "csv")
                text = "method,result\n" + r.method + "," + fmt_scalar_text(*r.scalar) + "\n";
            sink.write(text);
            return 0;
        }
        if (c_delta->parsed()) {
            Expression g = expr_text.empty() ? parse_expression("gauss(1)")
                                             : parse_expression(expr_text);
            if (order < 0 || order > 40) throw std::invalid_argument("order out of range [0,40]");
            DeltaRepresentation rep = build_representation(g, std::max(16, 2 * order + 8));
            const double v = truncated_delta(rep, probe, order);
            TransformResult r;
            r.method = "delta-approx";
            r.scalar = cplx(v, 0.0);
            r.diagnostics.push_back({"order", double(order)});
            r.diagnostics.push_back({"probe", probe});
            return emit_transform(sink, r);
        }
        if (c_blur->parsed()) {
            SampledSignal s = read_signal_csv(in_path);
            return emit_signal(sink, blur(s, a));
        }
        if (c_deblur->parsed()) {
            SampledSignal s = read_signal_csv(in_path);
            DeblurOperator op = build_deblur_operator(a, order, stencil);
            return emit_signal(sink, deblur(s, op));
        }
        if (c_qw->parsed())
            return emit_series(sink, weak_series(QuarticModel{a, lambda, jsrc}, order));
        if (c_qs->parsed())
            return emit_series(sink, strong_series(QuarticModel{a, lambda, jsrc}, order, pterms));
        if (c_qo->parsed()) {
            TransformResult r;
            r.method = "qft-oracle";
            r.scalar = cplx(z_quadrature(QuarticModel{a, lambda, jsrc}), 0.0);
            return emit_transform(sink, r);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const EngineError& e) {
        return emit_error(sink, e.name(), e.what());
    } catch (const std::invalid_argument& e) {
        return emit_error(sink, "InvalidArgument", e.what());
    } catch (const std::exception& e) {
        return emit_error(sink, "RuntimeError", e.what());
    }
    return 0;
}
