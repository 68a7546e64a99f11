#include "scan_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace qf::cli {

namespace {

class Parser {
public:
    Parser(std::string_view text, std::string_view param, double value) : s_(text), param_(param), value_(value) {}

    double run() {
        const double v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ExpressionError("in \"" + std::string(s_) + "\" at " + std::to_string(pos_) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    double expr() {
        double v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }

    double term() {
        double v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }

    double unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    double power() {
        const double base = primary();
        if (eat('^')) return std::pow(base, unary());
        return base;
    }

    double primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            const double v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            const auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (ec != std::errc()) fail("bad number");
            pos_ = static_cast<std::size_t>(end - s_.data());
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string_view name = s_.substr(start, pos_ - start);
            if (eat('(')) {
                const double x = expr();
                if (!eat(')')) fail("expected ')'");
                return call(name, x);
            }
            if (name == param_) return value_;
            if (name == "pi") return std::numbers::pi;
            if (name == "e") return std::numbers::e;
            fail("unknown name '" + std::string(name) + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    double call(std::string_view f, double x) const {
        if (f == "exp") return std::exp(x);
        if (f == "log") return std::log(x);
        if (f == "sqrt") return std::sqrt(x);
        if (f == "sin") return std::sin(x);
        if (f == "cos") return std::cos(x);
        if (f == "tan") return std::tan(x);
        if (f == "sinh") return std::sinh(x);
        if (f == "cosh") return std::cosh(x);
        if (f == "tanh") return std::tanh(x);
        if (f == "abs") return std::abs(x);
        fail("unknown function '" + std::string(f) + "'");
    }

    std::string_view s_;
    std::string_view param_;
    double value_;
    std::size_t pos_ = 0;
};

}  // namespace

double evaluate(std::string_view expr, std::string_view param, double value) {
    return Parser(expr, param, value).run();
}

}  // namespace qf::cli
