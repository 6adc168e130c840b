#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <string_view>

#include "gaugeforge/errors.hpp"
#include "gaugeforge/expr.hpp"

namespace gaugeforge {

namespace {

constexpr double kPi = 3.141592653589793;

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string>& declared)
        : text_(text), declared_(declared) {}

    Expr run() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    const std::set<std::string>& declared_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    // Peeks past whitespace without consuming; '\0' at end of input.
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) e = add(std::move(e), parse_term());
            else if (accept('-')) e = sub(std::move(e), parse_term());
            else return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_factor();
        for (;;) {
            if (accept('*')) e = mul(std::move(e), parse_factor());
            else if (accept('/')) e = div(std::move(e), parse_factor());
            else return e;
        }
    }

    Expr parse_factor() {
        if (accept('-')) return neg(parse_factor());
        Expr e = parse_atom();
        if (accept('^')) return pow(std::move(e), parse_exponent());
        return e;
    }

    Expr parse_atom() {
        char c = peek();
        if (c == '\0') throw SyntaxError("unexpected end of input", pos_);
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    Expr parse_number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            if (pos_ == text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                throw SyntaxError("expected digits after decimal point", pos_);
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ == text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                pos_ = mark;  // not an exponent: 'e' starts an identifier
            } else {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_)
            throw SyntaxError("malformed number", start);
        return num(value);
    }

    int parse_exponent() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) throw SyntaxError("expected integer exponent", pos_);
        int value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc()) throw SyntaxError("exponent out of range", start);
        return value;
    }

    Expr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));

        if (name == "t") return var(Var::T);
        if (name == "x") return var(Var::X);
        if (name == "v") return var(Var::V);
        if (name == "a") return var(Var::A);
        if (name == "pi") return num(kPi);
        if (name == "sin" || name == "cos" || name == "exp") {
            if (!accept('(')) throw SyntaxError("expected '(' after '" + name + "'", pos_);
            Expr arg = parse_expr();
            if (!accept(')')) throw SyntaxError("expected ')'", pos_);
            if (name == "sin") return sin(std::move(arg));
            if (name == "cos") return cos(std::move(arg));
            return exp(std::move(arg));
        }
        if (declared_.count(name)) return constant(std::move(name));
        throw UnknownIdentifier(name, start);
    }
};

}  // namespace

Expr parse(std::string_view text, const std::set<std::string>& declared) {
    return Parser(text, declared).run();
}

Expr parse(std::string_view text) {
    static const std::set<std::string> none;
    return parse(text, none);
}

}  // namespace gaugeforge
