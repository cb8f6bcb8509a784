#pragma once

// Gaussian-polynomial mollifiers with vanishing moments, and the nets that
// embed a small catalog of distributions by convolution with them.

#include "epsnet/expr.hpp"
#include "epsnet/hermite_table.hpp"
#include "epsnet/net.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace epsnet {

/// rho(t) = exp(-t^2) P(t) / sqrt(pi) with P even of degree M, chosen so that
/// int rho = 1 and int t^j rho = 0 for 1 <= j <= M.
class Mollifier final : public Kernel {
public:
    /// Solves the moment system and checks the moments by quadrature. Tables
    /// are read from / written to $EPSNET_CACHE when that directory is set.
    static std::shared_ptr<const Mollifier> build(int M = 4);

    int order() const { return M_; }
    /// Coefficients of P in powers of t (odd ones are zero).
    const std::vector<double>& coefficients() const { return p_; }
    /// int t^j rho over the line; 1 for j = 0 and exactly 0 for 1..M.
    double moment(int j) const;
    /// Moments measured by quadrature at build time, j = 0..M.
    const std::vector<double>& measured_moments() const { return measured_; }
    /// Hankel-system condition number (2-norm).
    double condition() const { return cond_; }
    std::string fingerprint() const { return fingerprint_; }
    bool loaded_from_cache() const { return from_cache_; }

    double value(double t) const { return derivative(0, t); }
    double derivative(int k, double t) const override;
    double primitive(double t) const override;
    double incomplete_moment(int j, double t) const override;

    /// Closed-form evaluation of I_j without the table (erfc recurrences).
    double incomplete_moment_exact(int j, double t) const;

    static constexpr int max_derivative = 24;
    static constexpr int tabulated_moments = 8;  // I_0..I_8 are splined
    static constexpr double table_half_width = 12.0;
    static constexpr int table_intervals = 24 * 64;

private:
    Mollifier() = default;
    void tabulate();
    bool load_cache(const std::string& path);
    void save_cache(const std::string& path) const;
    std::uint64_t grid_hash() const;

    int M_ = 4;
    std::vector<double> p_;
    std::vector<std::vector<double>> q_;  // rho^(k) = exp(-t^2) Q_k(t) / sqrt(pi)
    std::vector<HermiteTable> tables_;
    std::vector<double> measured_;
    double cond_ = 1.0;
    std::string fingerprint_;
    bool from_cache_ = false;
};

/// Catalog entry. Tensor products combine 1-D kinds along successive axes;
/// Combination is a finite linear combination of same-dimension entries.
struct DistributionSpec {
    enum class Kind { Delta, Heaviside, XPlus, Polynomial, Tensor, Combination };
    Kind kind = Kind::Delta;
    int order = 0;                // derivative order j of delta, power n of x_+
    std::vector<double> coeffs;   // Polynomial: c_0 + c_1 x + ...
    std::vector<DistributionSpec> factors;
    std::vector<double> weights;  // Combination

    static DistributionSpec delta(int j = 0);
    static DistributionSpec heaviside();
    static DistributionSpec xplus(int n);
    static DistributionSpec polynomial(std::vector<double> coeffs);
    static DistributionSpec tensor(std::vector<DistributionSpec> factors);
    static DistributionSpec combination(std::vector<double> weights, std::vector<DistributionSpec> terms);

    /// delta, delta(j), heaviside, xplus(n), poly(c0,c1,...), tensor(a,b,...),
    /// and weighted sums like "2*delta(1) + heaviside".
    static DistributionSpec parse(std::string_view text);

    int dim() const;
    void validate() const;
    std::string str() const;
};

/// The net of rho_eps * w in closed form (see the catalog in the README).
Net embed(const DistributionSpec& w, const std::shared_ptr<const Mollifier>& rho);

}  // namespace epsnet
