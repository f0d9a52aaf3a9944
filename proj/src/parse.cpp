#include "opcalc/parse.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "opcalc/errors.hpp"

namespace opcalc {

namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind = Tok::End;
    double num = 0.0;
    std::string text;
    size_t pos = 0;  // 0-based offset into the input
};

std::string at_pos(size_t pos) { return " at position " + std::to_string(pos + 1); }

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace((unsigned char)c)) { ++i; continue; }
        Token t;
        t.pos = i;
        if (std::isdigit((unsigned char)c) ||
            (c == '.' && i + 1 < s.size() && std::isdigit((unsigned char)s[i + 1]))) {
            const char* begin = s.c_str() + i;
            char* end = nullptr;
            t.num = std::strtod(begin, &end);
            if (end == begin) throw ParseError("bad number" + at_pos(i));
            t.kind = Tok::Num;
            t.text = s.substr(i, size_t(end - begin));
            i += size_t(end - begin);
        } else if (std::isalpha((unsigned char)c) || c == '_') {
            size_t j = i;
            while (j < s.size() && (std::isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
            t.kind = Tok::Ident;
            t.text = s.substr(i, j - i);
            i = j;
        } else {
            switch (c) {
                case '+': t.kind = Tok::Plus; break;
                case '-': t.kind = Tok::Minus; break;
                case '*': t.kind = Tok::Star; break;
                case '/': t.kind = Tok::Slash; break;
                case '^': t.kind = Tok::Caret; break;
                case '(': t.kind = Tok::LParen; break;
                case ')': t.kind = Tok::RParen; break;
                default:
                    throw ParseError(std::string("unexpected character '") + c + "'" + at_pos(i));
            }
            t.text = std::string(1, c);
            ++i;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.pos = s.size();
    out.push_back(end);
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Expression run() {
        Expression e = expr();
        if (peek().kind != Tok::End)
            throw ParseError("unexpected trailing input '" + peek().text + "'" + at_pos(peek().pos));
        return e;
    }

private:
    const Token& peek() const { return toks_[idx_]; }
    Token take() { return toks_[idx_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++idx_;
        return true;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k))
            throw ParseError(std::string("expected ") + what + at_pos(peek().pos));
    }

    Expression expr() {
        Expression e = term();
        for (;;) {
            if (accept(Tok::Plus)) {
                e = sum({e, term()});
            } else if (peek().kind == Tok::Minus) {
                ++idx_;
                e = sum({e, product({constant(-1.0), term()})});
            } else {
                return e;
            }
        }
    }

    Expression term() {
        Expression e = unary();
        for (;;) {
            if (accept(Tok::Star)) {
                e = product({e, unary()});
            } else if (peek().kind == Tok::Slash) {
                const size_t at = peek().pos;
                ++idx_;
                Expression d = unary();
                if (d.node().kind == Kind::Const) {
                    if (std::abs(d.node().cval) < 1e-300)
                        throw ParseError("division by zero" + at_pos(at));
                    e = product({e, constant(cplx(1.0, 0.0) / d.node().cval)});
                } else {
                    e = product({e, powi(d, -1)});
                }
            } else {
                return e;
            }
        }
    }

    Expression unary() {
        if (accept(Tok::Minus)) return product({constant(-1.0), factor()});
        return factor();
    }

    Expression factor() {
        Expression b = base();
        if (accept(Tok::Caret)) {
            bool neg = accept(Tok::Minus);
            const Token t = take();
            if (t.kind != Tok::Num || t.text.find_first_of(".eE") != std::string::npos)
                throw ParseError("exponent must be an integer" + at_pos(t.pos));
            double v = t.num;
            if (v > 1e6) throw ParseError("exponent too large" + at_pos(t.pos));
            int k = int(v);
            return powi(b, neg ? -k : k);
        }
        return b;
    }

    Expression base() {
        const Token t = take();
        switch (t.kind) {
            case Tok::Num: return constant(t.num);
            case Tok::LParen: {
                Expression e = expr();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Ident: {
                if (t.text == "i") return constant(cplx(0.0, 1.0));
                if (t.text == "x") return variable();
                return call(t);
            }
            default:
                throw ParseError("unexpected token '" + t.text + "'" + at_pos(t.pos));
        }
    }

    Expression call(const Token& name) {
        const bool known = name.text == "sin" || name.text == "cos" || name.text == "exp" ||
                           name.text == "log" || name.text == "theta" || name.text == "gauss" ||
                           name.text == "delta";
        if (!known)
            throw ParseError("unknown identifier '" + name.text + "'" + at_pos(name.pos));
        expect(Tok::LParen, "'(' after function name");
        Expression arg = expr();
        expect(Tok::RParen, "')'");

        if (name.text == "gauss") {
            auto pc = poly_coeffs(arg);
            if (!pc || pc->size() > 1)
                throw ParseError("gauss width must be a constant" + at_pos(name.pos));
            cplx w = pc->empty() ? cplx(0.0, 0.0) : (*pc)[0];
            if (std::abs(w.imag()) > 1e-12 || w.real() <= 0.0)
                throw ParseError("gauss width must be a positive real constant" + at_pos(name.pos));
            return gauss_of(w.real(), Affine{cplx(1.0, 0.0), cplx(0.0, 0.0)});
        }

        auto pc = poly_coeffs(arg);
        if (!pc || pc->size() > 2)
            throw ParseError("argument of " + name.text + " must be affine in x" + at_pos(name.pos));
        Affine a;
        a.c = pc->empty() ? cplx(0.0, 0.0) : (*pc)[0];
        a.alpha = pc->size() > 1 ? (*pc)[1] : cplx(0.0, 0.0);

        if (name.text == "sin") return sin_of(a);
        if (name.text == "cos") return cos_of(a);
        if (name.text == "exp") return exp_of(a);
        if (name.text == "log") return log_of(a);
        if (name.text == "theta") return theta_of(a);
        return delta_of(0, a);
    }

    std::vector<Token> toks_;
    size_t idx_ = 0;
};

}  // namespace

Expression parse_expression(const std::string& text) {
    try {
        return Parser(lex(text)).run();
    } catch (const ParseError&) {
        throw;
    } catch (const EngineError& e) {
        // factory-level rejection (e.g. theta of a complex-slope argument)
        throw ParseError(std::string("invalid construction: ") + e.what());
    }
}

}  // namespace opcalc
