#pragma once

// Representatives of generalized functions, numbers and points.

#include "epsnet/asymptotics.hpp"
#include "epsnet/expr.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace epsnet {

/// Where the members of a net are smooth.
struct Domain {
    enum class Kind { Whole, Pierced, Local };
    Kind kind = Kind::Whole;
    std::vector<double> center;  // Pierced: the excluded point (empty = origin)
    double delta = std::ldexp(1.0, -20);
    std::optional<CompactSet> region;  // Local: the set on which smoothness was checked

    static Domain whole() { return {}; }
    static Domain pierced(std::vector<double> center = {}, double delta = std::ldexp(1.0, -20));
    static Domain local(CompactSet region);

    bool is_whole() const { return kind == Kind::Whole; }
    bool is_pierced() const { return kind == Kind::Pierced; }
    std::vector<double> centre(int dim) const;
    /// Radius of the excluded ball at this eps: max(eps, delta).
    double exclusion(double eps) const { return std::max(eps, delta); }
    /// Throws PiercedViolation when K reaches the excluded ball at some grid
    /// eps, or leaves the region of a Local domain.
    void check(const CompactSet& K, const EpsGrid& grid) const;
    std::string str() const;
};

class Net {
public:
    Net() = default;
    Net(Expr base, int dim, Domain domain = {}, std::shared_ptr<const Kernel> kernel = nullptr);
    static Net parse(std::string_view text, int dim, Domain domain = {}, std::shared_ptr<const Kernel> kernel = nullptr);
    static Net zero(int dim) { return Net(Expr(), dim); }

    const Expr& base() const { return base_; }
    const std::map<int, Expr>& overrides() const { return overrides_; }
    /// The expression used at grid level k (eps = base^-k).
    const Expr& at_level(int k) const;
    Net& set_override(int k, Expr e);

    int dim() const { return dim_; }
    const Domain& domain() const { return domain_; }
    Net& set_domain(Domain d);
    const std::shared_ptr<const Kernel>& kernel() const { return kernel_; }
    Net& set_kernel(std::shared_ptr<const Kernel> k);

    /// Cutoff-guarded nets may differentiate abs / fractional powers although
    /// their domain is the whole space; the cutoff vanishes where those are singular.
    bool guarded() const { return guarded_; }
    Net& set_guarded(bool g);
    bool singular_ok() const { return guarded_ || domain_.kind != Domain::Kind::Whole; }

    bool uses_kernel() const;
    bool depends_on_eps() const;
    bool depends_on_space() const;

    const std::vector<std::string>& provenance() const { return provenance_; }
    Net& note(std::string line);

    double eval(int k, double eps, std::span<const double> x) const;
    std::string str() const;

private:
    Expr base_;
    std::map<int, Expr> overrides_;
    int dim_ = 1;
    Domain domain_;
    std::shared_ptr<const Kernel> kernel_;
    bool guarded_ = false;
    std::vector<std::string> provenance_;
};

/// eps-indexed scalar: an Expr in eps (plus per-level overrides), or values
/// tabulated on a grid.
class GenNumber {
public:
    GenNumber() = default;
    static GenNumber constant(double c);
    static GenNumber closed(Expr e, std::map<int, Expr> overrides = {});
    static GenNumber parse(std::string_view text);
    static GenNumber tabulated(EpsGrid grid, std::vector<double> values);

    bool is_tabulated() const { return tabulated_; }
    const Expr& expr() const { return expr_; }
    const std::map<int, Expr>& overrides() const { return overrides_; }
    Expr expr_at(int k) const;
    const EpsGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    /// Values on `g`; a tabulated number must carry exactly this grid.
    std::vector<double> on(const EpsGrid& g) const;
    std::string str() const;

private:
    bool tabulated_ = false;
    Expr expr_;
    std::map<int, Expr> overrides_;
    EpsGrid grid_;
    std::vector<double> values_;
};

GenNumber operator+(const GenNumber& a, const GenNumber& b);
GenNumber operator-(const GenNumber& a, const GenNumber& b);
GenNumber operator*(const GenNumber& a, const GenNumber& b);

/// eps-indexed point with a declared compact container.
struct GenPoint {
    std::vector<GenNumber> coords;
    CompactSet container;

    static GenPoint standard(std::vector<double> x);
    /// Coordinates at every grid point; throws PreconditionViolated if one leaves the container.
    std::vector<std::vector<double>> on(const EpsGrid& g) const;
};

}  // namespace epsnet
