// Recursive-descent parser for the expression language:
//
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := base ("^" exponent)?
//   base   := number | "eps" | var | fn "(" expr ")" | "(" expr ")" | "-" base
//   exponent := "-"? number ("/" number)? | "(" "-"? number ("/" number)? ")"
//
// fn is one of sin cos exp log sqrt abs bump Rho bstep, or an indexed family
// rho<k>, bump<k> (k-th derivative) and mom<j> (incomplete moment).

#include "epsnet/error.hpp"
#include "epsnet/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

namespace epsnet {

ParseError::ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected)
    : Error(message + " at offset " + std::to_string(offset)), offset_(offset), expected_(std::move(expected)) {}

DomainError::DomainError(const std::string& message, std::string subexpression)
    : Error(message + ": " + subexpression), subexpression_(std::move(subexpression)) {}

CBoundednessViolation::CBoundednessViolation(const std::string& message, double eps, std::vector<double> point)
    : Error(message), eps_(eps), point_(std::move(point)) {}

namespace {

class Parser {
public:
    Parser(std::string_view src, int dim) : src_(src), dim_(dim) {
        if (dim < 0 || dim > 9) throw ParseError("dimension must lie in 0..9", 0);
    }

    Expr run() {
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input", {"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    std::string_view src_;
    int dim_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected = {}) const {
        throw ParseError(msg, pos_, std::move(expected));
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + term();
            } else if (accept('-')) {
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * factor();
            } else if (accept('/')) {
                lhs = lhs / factor();
            } else {
                return lhs;
            }
        }
    }

    Expr factor() {
        Expr b = base();
        if (accept('^')) return pow(b, exponent());
        return b;
    }

    bool at_number_start() {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])));
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) {
            pos_ = start;
            fail("expected a number", {"number"});
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;  // "2eps" style: the e belongs to an identifier
        }
        double v = 0.0;
        const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc()) {
            pos_ = start;
            fail("malformed number", {"number"});
        }
        return v;
    }

    Rational exponent() {
        const bool paren = accept('(');
        const bool negative = accept('-');
        if (!at_number_start()) fail("expected exponent", {"number", "-", "("});
        double num = number();
        double den = 1.0;
        if (peek() == '/' && slash_then_number()) {
            ++pos_;
            den = number();
            if (den == 0.0) fail("zero exponent denominator");
        }
        if (paren && !accept(')')) fail("expected ')'", {")"});
        if (negative) num = -num;
        if (num == std::floor(num) && den == std::floor(den) && std::abs(num) < 1e15 && den < 1e15) {
            return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
        }
        return Rational::approximate(num / den);
    }

    // "x^2/3" reads as x^(2/3); "x^2/(3)" and "x^2/y" divide.
    bool slash_then_number() {
        std::size_t q = pos_ + 1;
        while (q < src_.size() && std::isspace(static_cast<unsigned char>(src_[q]))) ++q;
        return q < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[q])) || src_[q] == '.');
    }

    std::string identifier() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        return std::string(src_.substr(start, pos_ - start));
    }

    static bool indexed(const std::string& id, const std::string& prefix, int& order) {
        if (id.size() <= prefix.size() || id.compare(0, prefix.size(), prefix) != 0) return false;
        const std::string rest = id.substr(prefix.size());
        for (char c : rest)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        if (rest.size() > 2) return false;
        order = std::stoi(rest);
        return true;
    }

    Expr base() {
        const char c = peek();
        if (c == '\0') fail("unexpected end of input", {"number", "eps", "variable", "function", "(", "-"});
        if (c == '-') {
            ++pos_;
            if (at_number_start()) return Expr::constant(-number());
            return -base();
        }
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            if (!accept(')')) fail("expected ')'", {")", "+", "-", "*", "/"});
            return e;
        }
        if (at_number_start()) return Expr::constant(number());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            const std::string id = identifier();
            if (id == "eps") return Expr::eps();
            if (id == "x") {
                if (dim_ != 1) {
                    pos_ = start;
                    fail("variable 'x' is only valid in dimension 1", {"x1..x" + std::to_string(dim_)});
                }
                return Expr::variable(0);
            }
            int k = 0;
            if (id.size() == 2 && id[0] == 'x' && std::isdigit(static_cast<unsigned char>(id[1])) && id[1] != '0') {
                k = id[1] - '0';
                if (k > dim_) {
                    pos_ = start;
                    fail("variable '" + id + "' exceeds dimension " + std::to_string(dim_));
                }
                return Expr::variable(k - 1);
            }
            Op op{};
            int order = 0;
            static const std::map<std::string, Op> plain = {
                {"sin", Op::Sin},   {"cos", Op::Cos},   {"exp", Op::Exp},        {"log", Op::Log},  {"sqrt", Op::Sqrt},
                {"abs", Op::Abs},   {"bump", Op::Bump}, {"Rho", Op::KernelPrim}, {"bstep", Op::Step},
            };
            if (auto it = plain.find(id); it != plain.end()) {
                op = it->second;
            } else if (indexed(id, "rho", order)) {
                op = Op::KernelDeriv;
            } else if (indexed(id, "bump", order)) {
                op = Op::Bump;
            } else if (indexed(id, "mom", order)) {
                op = Op::KernelMoment;
                if (order == 0) op = Op::KernelPrim;
            } else {
                pos_ = start;
                fail("unknown identifier '" + id + "'", {"eps", "x", "function name"});
            }
            if (!accept('(')) fail("expected '(' after function name", {"("});
            Expr arg = expr();
            if (peek() == ',') fail("function '" + id + "' takes one argument", {")"});
            if (!accept(')')) fail("expected ')'", {")"});
            return Expr::unary(op, arg, order);
        }
        fail(std::string("unexpected character '") + c + "'", {"number", "eps", "variable", "function", "(", "-"});
    }
};

}  // namespace

Expr parse(std::string_view source, int dim) { return Parser(source, dim).run(); }

}  // namespace epsnet
