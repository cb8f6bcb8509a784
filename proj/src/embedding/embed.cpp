#include "epsnet/embedding.hpp"

#include "epsnet/algebra.hpp"
#include "epsnet/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace epsnet {

DistributionSpec DistributionSpec::delta(int j) {
    DistributionSpec w;
    w.kind = Kind::Delta;
    w.order = j;
    w.validate();
    return w;
}

DistributionSpec DistributionSpec::heaviside() {
    DistributionSpec w;
    w.kind = Kind::Heaviside;
    return w;
}

DistributionSpec DistributionSpec::xplus(int n) {
    DistributionSpec w;
    w.kind = Kind::XPlus;
    w.order = n;
    w.validate();
    return w;
}

DistributionSpec DistributionSpec::polynomial(std::vector<double> coeffs) {
    DistributionSpec w;
    w.kind = Kind::Polynomial;
    w.coeffs = std::move(coeffs);
    w.validate();
    return w;
}

DistributionSpec DistributionSpec::tensor(std::vector<DistributionSpec> factors) {
    DistributionSpec w;
    w.kind = Kind::Tensor;
    w.factors = std::move(factors);
    w.validate();
    return w;
}

DistributionSpec DistributionSpec::combination(std::vector<double> weights, std::vector<DistributionSpec> terms) {
    DistributionSpec w;
    w.kind = Kind::Combination;
    w.weights = std::move(weights);
    w.factors = std::move(terms);
    w.validate();
    return w;
}

int DistributionSpec::dim() const {
    switch (kind) {
        case Kind::Tensor: return static_cast<int>(factors.size());
        case Kind::Combination: return factors.empty() ? 1 : factors.front().dim();
        default: return 1;
    }
}

void DistributionSpec::validate() const {
    switch (kind) {
        case Kind::Delta:
            if (order < 0 || order > 6) throw PreconditionViolated("delta derivative order must lie in 0..6");
            break;
        case Kind::XPlus:
            if (order < 0 || order > 6) throw PreconditionViolated("x_+ power must lie in 0..6");
            break;
        case Kind::Heaviside: break;
        case Kind::Polynomial:
            if (coeffs.empty()) throw PreconditionViolated("polynomial without coefficients");
            for (double c : coeffs)
                if (!std::isfinite(c)) throw PreconditionViolated("polynomial coefficient is not finite");
            break;
        case Kind::Tensor:
            if (factors.empty() || factors.size() > 9) throw PreconditionViolated("tensor product needs 1..9 factors");
            for (const auto& f : factors) {
                if (f.dim() != 1 || f.kind == Kind::Tensor) throw PreconditionViolated("tensor factors must be one-dimensional");
                f.validate();
            }
            break;
        case Kind::Combination:
            if (factors.empty() || weights.size() != factors.size())
                throw PreconditionViolated("linear combination needs one weight per term");
            for (const auto& f : factors) {
                if (f.dim() != factors.front().dim()) throw PreconditionViolated("combined terms differ in dimension");
                f.validate();
            }
            break;
    }
}

std::string DistributionSpec::str() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::Delta: os << "delta(" << order << ")"; break;
        case Kind::Heaviside: os << "heaviside"; break;
        case Kind::XPlus: os << "xplus(" << order << ")"; break;
        case Kind::Polynomial:
            os << "poly(";
            for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
            os << ")";
            break;
        case Kind::Tensor:
            os << "tensor(";
            for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "," : "") << factors[i].str();
            os << ")";
            break;
        case Kind::Combination:
            for (std::size_t i = 0; i < factors.size(); ++i) {
                const double w = weights[i];
                if (i) os << (w < 0 ? " - " : " + ");
                else if (w < 0) os << "-";
                os << std::abs(w) << "*" << factors[i].str();
            }
            break;
    }
    return os.str();
}

namespace {

class SpecParser {
public:
    explicit SpecParser(std::string_view s) : s_(s) {}

    DistributionSpec run() {
        DistributionSpec w = sum();
        ws();
        if (i_ != s_.size()) fail("unexpected trailing input");
        return w;
    }

private:
    std::string_view s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& m) const { throw ParseError("distribution spec: " + m, i_); }

    void ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool accept(char c) {
        ws();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    bool number_ahead() {
        ws();
        return i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.');
    }

    double number() {
        ws();
        double v = 0.0;
        const char* b = s_.data() + i_;
        auto [p, ec] = std::from_chars(b, s_.data() + s_.size(), v);
        if (ec != std::errc()) fail("expected a number");
        i_ += p - b;
        return v;
    }

    double signed_number() {
        const bool neg = accept('-');
        if (!neg) accept('+');
        const double v = number();
        return neg ? -v : v;
    }

    int integer() {
        const double v = number();
        if (v != std::floor(v)) fail("expected an integer");
        return static_cast<int>(v);
    }

    std::string ident() {
        ws();
        const std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        if (b == i_) fail("expected a distribution name");
        return std::string(s_.substr(b, i_ - b));
    }

    DistributionSpec sum() {
        std::vector<double> w;
        std::vector<DistributionSpec> t;
        double sign = 1.0;
        if (accept('-')) sign = -1.0;
        for (;;) {
            double c = 1.0;
            if (number_ahead()) {
                c = number();
                expect('*');
            }
            w.push_back(sign * c);
            t.push_back(atom());
            if (accept('+')) {
                sign = 1.0;
            } else if (accept('-')) {
                sign = -1.0;
            } else {
                break;
            }
        }
        if (t.size() == 1 && w[0] == 1.0) return t[0];
        return DistributionSpec::combination(std::move(w), std::move(t));
    }

    DistributionSpec atom() {
        const std::string name = ident();
        if (name == "delta") {
            if (!accept('(')) return DistributionSpec::delta(0);
            const int j = integer();
            expect(')');
            return DistributionSpec::delta(j);
        }
        if (name == "heaviside" || name == "H") return DistributionSpec::heaviside();
        if (name == "xplus") {
            expect('(');
            const int n = integer();
            expect(')');
            return DistributionSpec::xplus(n);
        }
        if (name == "poly") {
            expect('(');
            std::vector<double> c{signed_number()};
            while (accept(',')) c.push_back(signed_number());
            expect(')');
            return DistributionSpec::polynomial(std::move(c));
        }
        if (name == "tensor") {
            expect('(');
            std::vector<DistributionSpec> f{atom()};
            while (accept(',')) f.push_back(atom());
            expect(')');
            return DistributionSpec::tensor(std::move(f));
        }
        fail("unknown distribution '" + name + "'");
    }
};

Expr var_over_eps(int axis) { return fold::div(Expr::variable(axis), Expr::eps()); }

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// 1-D closed form along `axis`; the note records approximation caveats.
Expr embed_1d(const DistributionSpec& w, const Mollifier& rho, int axis, std::string& note) {
    const Expr x = Expr::variable(axis);
    switch (w.kind) {
        case DistributionSpec::Kind::Delta: {
            // eps^(-1-j) rho_j(x/eps), as nested 1/eps factors so it matches
            // repeated differentiation of the Heaviside net
            Expr e = Expr::unary(Op::KernelDeriv, var_over_eps(axis), w.order);
            const Expr inv = fold::div(Expr::constant(1.0), Expr::eps());
            for (int i = 0; i <= w.order; ++i) e = fold::mul(inv, e);
            return e;
        }
        case DistributionSpec::Kind::Heaviside: return Expr::unary(Op::KernelPrim, var_over_eps(axis));
        case DistributionSpec::Kind::XPlus: {
            const int n = w.order;
            Expr s;
            for (int j = 0; j <= n; ++j) {
                const Expr mom = j == 0 ? Expr::unary(Op::KernelPrim, var_over_eps(axis))
                                        : Expr::unary(Op::KernelMoment, var_over_eps(axis), j);
                const double c = binomial(n, j) * (j % 2 ? -1.0 : 1.0);
                Expr term = fold::mul(fold::pow(x, Rational(n - j)), fold::mul(fold::pow(Expr::eps(), Rational(j)), mom));
                term = fold::mul(Expr::constant(c), term);
                s = j == 0 ? term : fold::add(s, term);
            }
            return s;
        }
        case DistributionSpec::Kind::Polynomial: {
            Expr s;
            bool first = true;
            const int deg = static_cast<int>(w.coeffs.size()) - 1;
            for (int i = 0; i <= deg; ++i) {
                if (w.coeffs[i] == 0.0) continue;
                const Expr t = fold::mul(Expr::constant(w.coeffs[i]), fold::pow(x, Rational(i)));
                s = first ? t : fold::add(s, t);
                first = false;
            }
            if (deg > rho.order()) {
                std::ostringstream os;
                os << "polynomial of degree " << deg << " kept as is; the convolution differs by O(eps^" << rho.order() + 2
                   << ") since only moments up to " << rho.order() << " vanish";
                note = os.str();
            } else {
                note = "polynomial of degree <= M: the convolution is exact";
            }
            return s;
        }
        default: throw PreconditionViolated("not a one-dimensional catalog entry: " + w.str());
    }
}

}  // namespace

DistributionSpec DistributionSpec::parse(std::string_view text) { return SpecParser(text).run(); }

Net embed(const DistributionSpec& w, const std::shared_ptr<const Mollifier>& rho) {
    if (!rho) throw PreconditionViolated("embedding needs a mollifier");
    w.validate();
    const int d = w.dim();
    std::string note;
    Net r;
    switch (w.kind) {
        case DistributionSpec::Kind::Tensor: {
            Expr e;
            for (int i = 0; i < d; ++i) {
                std::string n;
                const Expr f = embed_1d(w.factors[i], *rho, i, n);
                e = i == 0 ? f : fold::mul(e, f);
                if (!n.empty()) note += (note.empty() ? "" : "; ") + n;
            }
            r = Net(e, d, Domain::whole(), rho);
            break;
        }
        case DistributionSpec::Kind::Combination: {
            r = Net::zero(d).set_kernel(rho);
            for (std::size_t i = 0; i < w.factors.size(); ++i) {
                const Net t = scale(embed(w.factors[i], rho), GenNumber::constant(w.weights[i]));
                r = r + t;
                for (const auto& p : t.provenance()) r.note(p);
            }
            break;
        }
        default:
            r = Net(embed_1d(w, *rho, 0, note), 1, Domain::whole(), rho);
            break;
    }
    r.note("embedded " + w.str() + " with " + rho->fingerprint());
    if (!note.empty()) r.note(note);
    return r;
}

}  // namespace epsnet
