#pragma once

// Detectors for strong, weak and associative homogeneity, invariance under
// scaling and translation, Euler residuals, radial factorization, extension
// through the origin, tempered representatives and coefficient recovery.

#include "epsnet/algebra.hpp"
#include "epsnet/analysis.hpp"

#include <optional>
#include <string>
#include <vector>

namespace epsnet {

struct HomogeneityQuery {
    double alpha = 0.0;
    std::vector<double> lambdas{0.5, 2.0, 3.0};
    std::vector<CompactSet> Ks;       // empty: default suite for the net
    double m = 8.0;
    std::vector<TestFunction> phis;   // empty: default suite for the mode
    EpsGrid grid;
    Tolerances tol;
    double assoc_tol = 1e-4;
};

enum class HomogeneityMode { Strong, Weak, Assoc };

/// [-1,1]^d for whole-space nets, the annulus 0.5 <= |x| <= 2 for pierced
/// ones, the checked region for local ones.
std::vector<CompactSet> default_compacts(const Net& u);
/// Weak mode: two test functions supported away from 0, one modulated.
/// Assoc mode adds a bump centred at 0 unless u is pierced.
std::vector<TestFunction> default_testfns(const Net& u, HomogeneityMode mode);

/// alpha is a nonnegative integer (within tol).
bool degree_gate(double alpha, double tol = 1e-9);

struct HomogeneityCell {
    std::string label;
    DecayVerdict verdict;
    std::vector<double> residuals;  // pairing residuals (weak mode)
};

struct HomogeneityVerdict {
    DecayVerdict overall;
    std::vector<HomogeneityCell> cells;
    std::optional<DecayVerdict> constancy;  // invariance detectors, whole-space nets
    std::string note;
    bool passed() const { return overall.passed() && (!constancy || constancy->passed()); }
    std::string str() const;
};

HomogeneityVerdict scaling_invariance(const Net& u, const HomogeneityQuery& q);
HomogeneityVerdict translation_invariance(const Net& u, const std::vector<std::vector<double>>& shifts,
                                          const std::vector<CompactSet>& Ks, double m, const EpsGrid& grid = {},
                                          const Tolerances& tol = {});
HomogeneityVerdict strong_homogeneity(const Net& u, const HomogeneityQuery& q);
HomogeneityVerdict weak_homogeneity(const Net& u, const HomogeneityQuery& q);
/// Per (lambda, phi): the pairing residual sequence under the Cauchy gate.
/// The detector passes when converges_to_zero(q.assoc_tol) holds.
AssociationVerdict associative_homogeneity(const Net& u, const HomogeneityQuery& q);

/// sum_i x_i d_i u - alpha u.
Net euler_residual(const Net& u, double alpha);
DecayVerdict euler_strong(const Net& u, double alpha, const std::vector<CompactSet>& Ks, double m, const EpsGrid& grid = {},
                          const Tolerances& tol = {});
AssociationVerdict euler_associated(const Net& u, double alpha, const std::vector<TestFunction>& phis,
                                    const EpsGrid& grid = {}, double assoc_tol = 1e-4);

/// u(x/|x|) |x|^alpha, on the pierced space.
Net radial_core(const Net& u, double alpha);
DecayVerdict radial_factorization_check(const Net& u, double alpha, const std::vector<CompactSet>& annuli, double m,
                                        const EpsGrid& grid = {}, const Tolerances& tol = {});

/// The cutoff profile: sigma(y) = 1 - bstep((2 y^2 - 5)/3), identically 1 for
/// |y| <= 1 and 0 for |y| >= 2. `sigma_expr(s)` is sigma(|x|/s) for s > 0.
double cutoff_sigma(double y);
Expr sigma_expr(int dim, const Expr& scale);

struct ExtensionResult {
    Net extension;            // whole space, cutoff-guarded
    Net core;                 // u(x/|x|) |x|^alpha
    DecayVerdict radial;      // recorded precondition: u against its core on the annulus
    DecaySamples samples;     // sup over B(0,1), no derivative
    DecayVerdict moderate;    // of the extension on B(0,1)
    double input_order = 0;   // N of u on the annulus 0.5 <= |x| <= 2
    double bound = 0;         // N + |alpha| + 0.5
    bool within_bound = false;
    std::string str() const;
};

/// hat u = (1 - sigma(|x|/eps)) u(x/|x|) |x|^alpha for a pierced u. Whether
/// u really is homogeneous is not gated; the radial check is recorded.
ExtensionResult homogeneous_extension(const Net& u, double alpha, const EpsGrid& grid = {}, const Tolerances& tol = {});

struct RestrictionResult {
    bool structural = false;   // the cutoff is identically 1 on the annulus for every grid eps
    DecayVerdict verdict;      // structural: core vs u; otherwise hat u vs u
    double numeric_sup = 0.0;  // max |hat u - u| over the annulus lattice and grid
    double floor = 1e-13;
    bool passed() const { return verdict.passed() && (!structural || numeric_sup <= floor); }
};

/// Compare the extension with u on an annulus (or box avoiding 0).
RestrictionResult extension_restriction(const ExtensionResult& ext, const Net& u, const CompactSet& annulus, double m,
                                        const EpsGrid& grid = {}, const Tolerances& tol = {});

/// u sigma + u(x/|x|)|x|^alpha (1 - sigma); a pierced u is replaced by its
/// extension first.
Net tempered_representative(const Net& u, double alpha);

struct TemperedVerdict {
    bool passed = false;
    std::vector<HomogeneityCell> cells;  // one per (R, beta)
    std::vector<double> growth;          // C_R = max_k S_k eps_k^N, per R
    std::string note;
    std::string str() const;
};

/// sup over [-R,R]^d of (1+|x|)^-N |d^beta v| must be Moderate with order at
/// most N + |beta|, and C_R must not grow faster than a factor 2 between the
/// last two radii.
TemperedVerdict tempered_check(const Net& v, double N, const std::vector<double>& radii = {1, 10, 100}, int max_order = 2,
                               const EpsGrid& grid = {}, const Tolerances& tol = {});

struct CoefficientResult {
    std::vector<std::vector<int>> monomials;  // degree-k exponents, lexicographically descending
    std::vector<GenNumber> coefficients;
    std::vector<std::vector<double>> lattice;  // d > 1 only
    double condition = 1.0;
    DecayVerdict residual;
    std::string str() const;
};

/// Coefficients of a degree-k homogeneous polynomial representing u.
CoefficientResult polynomial_coefficients(const Net& u, int k, double m = 8.0, const std::vector<CompactSet>& Ks = {},
                                          const EpsGrid& grid = {}, const Tolerances& tol = {});

/// Points of {0..k}^d other than 0 with a coordinate equal to 1 or no zero
/// coordinate, in lexicographic order.
std::vector<std::vector<double>> coefficient_lattice(int dim, int k);

}  // namespace epsnet
