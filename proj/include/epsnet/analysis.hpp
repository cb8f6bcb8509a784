#pragma once

// Integrals between generalized bounds, and pairings of nets with test
// functions (the eps -> 0 limits behind association).

#include "epsnet/asymptotics.hpp"
#include "epsnet/net.hpp"

#include <string>
#include <vector>

namespace epsnet {

/// phi(x) = Z q(x) prod_i bump((x_i - c_i) / r), with Z making the
/// unmodulated bump a unit mass. Supported on the cube of half-width r.
struct TestFunction {
    std::vector<double> center;
    double radius = 1.0;
    Expr modulation;  // q; an empty (zero) Expr means q = 1
    double norm = 1.0;
    bool away = false;  // support excludes a neighbourhood of 0

    static TestFunction make(std::vector<double> center, double radius, Expr q = {});
    /// q given as text in the variables x (d = 1) or x1..xd.
    static TestFunction make(std::vector<double> center, double radius, std::string_view q);

    int dim() const { return static_cast<int>(center.size()); }
    bool modulated() const;
    double operator()(std::span<const double> x) const;
    /// The support as a box.
    CompactSet support() const;
    /// phi as an expression in x1..xd.
    Expr expr() const;
    std::string str() const;
};

struct PairingSequence {
    EpsGrid grid;
    std::vector<double> values;  // <u_eps_k, phi>
    std::vector<double> errors;  // quadrature error estimates
    std::vector<bool> flagged;   // error above 1e-10 (1 + |v|) or not converged
    std::vector<std::size_t> evaluations;
    std::string where;

    bool any_flagged() const;
};

/// Grid used for pairings: capped at k = 14 when u evaluates the mollifier.
EpsGrid pairing_grid(const Net& u, const EpsGrid& grid = {});

PairingSequence pair(const Net& u, const TestFunction& phi, const EpsGrid& grid = {});

/// int_{a_eps}^{b_eps} |f_eps| per grid eps. Needs a << b, i.e. b - a
/// strictly positive; throws PreconditionViolated otherwise.
GenNumber integrate_abs(const Net& f, const GenNumber& a, const GenNumber& b, const EpsGrid& grid = {});

struct PhiAssociation {
    TestFunction phi;
    std::string label;  // replaces phi.str() in reports when set
    PairingSequence sequence;
    bool converges = false;
    double limit = 0.0;        // last value
    double oscillation = 0.0;  // max - min over the tail quarter
    double rate = 0.0;         // log-log slope of successive differences (nan if not measurable)
    std::string str() const;
};

struct AssociationVerdict {
    bool converges = false;  // conjunction over the test functions
    std::vector<PhiAssociation> per_phi;
    bool any_flagged() const;
    /// Converges, and every limit is below `tol` in magnitude.
    bool converges_to_zero(double tol = 1e-4) const;
    std::string str() const;
};

AssociationVerdict associate(const Net& u, const std::vector<TestFunction>& phis, const EpsGrid& grid = {},
                             double assoc_tol = 1e-4);

/// Cauchy gate on an already computed sequence: the tail-quarter oscillation
/// must stay below assoc_tol.
PhiAssociation assess(const TestFunction& phi, PairingSequence seq, double assoc_tol = 1e-4);

/// Index of the first point of the tail quarter (the last ceil(n/4) points).
std::size_t tail_quarter_begin(std::size_t n);

}  // namespace epsnet
