#pragma once

#include "epsnet/asymptotics.hpp"
#include "epsnet/net.hpp"

#include <string>
#include <vector>

namespace epsnet {

enum class CombineOp { Add, Sub, Mul };

/// Pointwise combination; the override sets are merged by union.
Net combine(const Net& a, const Net& b, CombineOp op);
Net operator+(const Net& a, const Net& b);
Net operator-(const Net& a, const Net& b);
Net operator*(const Net& a, const Net& b);
Net scale(const Net& a, const GenNumber& c);
Net derive(const Net& a, int axis);
Net derive(const Net& a, const std::vector<int>& multi_index);

/// Every multi-index of length d with total order <= max_order, by order.
std::vector<std::vector<int>> multi_indices(int dim, int max_order);

/// True when base and every override simplify to 0.
bool structurally_zero(const Net& n);

/// ExactZero when u - v is structurally zero, else the worst negligibility
/// verdict at order m over Ks and derivative orders 0..max_order.
DecayVerdict equals(const Net& u, const Net& v, const std::vector<CompactSet>& Ks, double m, const EpsGrid& grid = {},
                    const Tolerances& tol = {}, int max_order = 2);

GenNumber eval_point(const Net& u, const GenPoint& p, const EpsGrid& grid = {});

DecayVerdict nonneg_consistent(const GenNumber& a, double m, const EpsGrid& grid = {}, const Tolerances& tol = {});

struct PositivityVerdict {
    bool passed = false;
    int m0 = -1;
    std::string note;
};

/// Least m0 <= m_budget with a_k > eps_k^m0 on the whole grid tail.
PositivityVerdict strictly_positive(const GenNumber& a, int m_budget, const EpsGrid& grid = {});

/// |x| as an expression: abs(x) for d = 1, sqrt(x1^2 + ... + xd^2) otherwise.
Expr norm_expr(int dim);

/// Spatial maps for compose.
struct Map {
    enum class Kind { Translate, Scale, GenScale, Radial, General };
    Kind kind = Kind::Translate;
    std::vector<double> shift;      // Translate: x + h
    double lambda = 1.0;            // Scale: lambda x
    GenNumber factor;               // GenScale: b_eps x
    std::vector<Net> components;    // General: x -> (g_1, ..., g_d)

    static Map translate(std::vector<double> h);
    static Map scale(double lambda);
    static Map gen_scale(GenNumber b);
    static Map radial();
    static Map general(std::vector<Net> components);
    std::string str() const;
};

/// u o g. The image of K under g is checked on the grid: it must stay bounded
/// (sup |g| with slope >= -slope_tol) and, for pierced u, keep clear of the
/// excluded ball. Throws CBoundednessViolation otherwise.
Net compose(const Net& u, const Map& g, const CompactSet& K, const EpsGrid& grid = {}, const Tolerances& tol = {});

/// u o g without the image check; the domain is transported for translations
/// and scalings and becomes Local otherwise.
Net compose_unchecked(const Net& u, const Map& g);

}  // namespace epsnet
