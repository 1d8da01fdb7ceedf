#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "nash/errors.hpp"
#include "nash/multipoly.hpp"
#include "nash/rational.hpp"

namespace nash {

/// Thrown on malformed polynomial text.
struct ParseError : InputError {
    using InputError::InputError;
};

namespace detail {

inline std::string monomial_text(const Exps& e, const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        if (!out.empty()) out += "*";
        out += names[i];
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
    return out;
}

inline std::string term_text(const Exps& e, const GaussRat& c,
                             const std::vector<std::string>& names) {
    std::string mono = monomial_text(e, names);
    if (mono.empty()) return c.to_string();
    if (c.is_real()) {
        if (c.re() == 1) return mono;
        if (c.re() == -1) return "-" + mono;
        return mpq_class(c.re()).get_str() + "*" + mono;
    }
    if (c.re() == 0) return c.to_string() + "*" + mono;
    return "(" + c.to_string() + ")*" + mono;
}

}  // namespace detail

/// Canonical text form: terms in descending graded-lex order, explicit
/// '*' between factors, rationals as a/b, imaginary unit spelled i.
inline std::string to_text(const MultiPoly& p, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != p.nvars())
        throw PreconditionError("to_text: name list arity mismatch");
    if (p.is_zero()) return "0";
    std::string out;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        std::string t = detail::term_text(it->first, it->second, names);
        if (out.empty()) {
            out = t;
        } else if (!t.empty() && t[0] == '-') {
            out += t;
        } else {
            out += "+" + t;
        }
    }
    return out;
}

namespace detail {

class PolyParser {
public:
    PolyParser(const std::string& text, const std::vector<std::string>& names)
        : text_(text), names_(names) {
        for (size_t i = 0; i < names.size(); ++i) index_[names[i]] = static_cast<int>(i);
    }

    MultiPoly parse() {
        MultiPoly p = expr();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("polynomial text: trailing input at offset " + std::to_string(pos_));
        return p;
    }

private:
    int nvars() const { return static_cast<int>(names_.size()); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    MultiPoly expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        MultiPoly acc = term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+'))
                acc += term();
            else if (eat('-'))
                acc -= term();
            else
                break;
        }
        return acc;
    }

    MultiPoly term() {
        MultiPoly acc = factor();
        while (eat('*')) acc *= factor();
        return acc;
    }

    MultiPoly factor() {
        MultiPoly base = atom();
        if (eat('^')) {
            long e = integer();
            if (e < 0) throw ParseError("polynomial text: negative exponent");
            base = base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    MultiPoly atom() {
        char c = peek();
        if (c == '(') {
            eat('(');
            MultiPoly p = expr();
            if (!eat(')')) throw ParseError("polynomial text: missing ')'");
            return p;
        }
        if (c == '-') {
            eat('-');
            return -factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return rational();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        throw ParseError(std::string("polynomial text: unexpected character '") + c + "'");
    }

    MultiPoly rational() {
        mpz_class num = raw_integer();
        if (eat('/')) {
            mpz_class den = raw_integer();
            return MultiPoly::constant(nvars(), GaussRat::fraction(num, den));
        }
        return MultiPoly::constant(nvars(), GaussRat(mpq_class(num)));
    }

    long integer() {
        mpz_class z = raw_integer();
        if (!z.fits_slong_p()) throw ParseError("polynomial text: exponent too large");
        return z.get_si();
    }

    mpz_class raw_integer() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) throw ParseError("polynomial text: expected a number");
        return mpz_class(text_.substr(start, pos_ - start));
    }

    MultiPoly ident() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name == "i") return MultiPoly::constant(nvars(), GaussRat::i());
        auto it = index_.find(name);
        if (it == index_.end()) throw ParseError("polynomial text: unknown variable '" + name + "'");
        return MultiPoly::variable(nvars(), it->second);
    }

    const std::string& text_;
    const std::vector<std::string>& names_;
    std::map<std::string, int> index_;
    size_t pos_ = 0;
};

}  // namespace detail

/// Parses polynomial text over the given variables. Accepts the canonical
/// form plus general +, -, *, ^ and parenthesized expressions; the name
/// "i" is reserved for the imaginary unit.
inline MultiPoly parse_poly(const std::string& text, const std::vector<std::string>& names) {
    detail::PolyParser p(text, names);
    return p.parse();
}

}  // namespace nash
