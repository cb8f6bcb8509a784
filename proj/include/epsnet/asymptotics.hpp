#pragma once

// Sup-norm sampling over compact sets on a geometric eps grid, and the
// log-log slope fits that turn O(eps^a) statements into verdicts.

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace epsnet {

class Net;

/// eps_k = base^-k for k = k_min..k_max.
struct EpsGrid {
    double base = 2.0;
    int k_min = 6;
    int k_max = 20;

    std::size_t size() const { return static_cast<std::size_t>(k_max - k_min + 1); }
    int level(std::size_t i) const { return k_min + static_cast<int>(i); }
    double eps(std::size_t i) const;
    double eps_at_level(int k) const;
    /// First index of the tail half (the last ceil(n/2) points).
    std::size_t tail_begin() const { return size() / 2; }
    /// Same base and k_min, k_max capped at `k`.
    EpsGrid capped(int k) const;
    void validate() const;
    bool operator==(const EpsGrid&) const = default;
    std::string str() const;
};

/// Box (per-axis [lo, hi]) or annulus r_in <= |x| <= r_out.
struct CompactSet {
    enum class Kind { Box, Annulus };
    Kind kind = Kind::Box;
    std::vector<std::pair<double, double>> box;
    double r_in = 0.0;
    double r_out = 0.0;
    int dim = 1;
    int samples = 0;  // per axis; 0 picks 257 (d=1) or 65 (d>=2)
    std::vector<double> focus;  // centre of the eps patch (empty = origin)
    double focus_rho = 1.0;     // patch spacing eps^focus_rho / 4

    static CompactSet interval(double lo, double hi, int samples = 0);
    static CompactSet cube(int dim, double lo, double hi, int samples = 0);
    static CompactSet annulus(int dim, double r_in, double r_out, int samples = 0);

    int per_axis() const;
    /// Smallest |x - c| over the set (0 if c is inside).
    double distance_from(const std::vector<double>& c) const;
    /// Largest |x|_inf over the set.
    double extent() const;
    bool contains(const std::vector<double>& x, double slack = 0.0) const;
    void validate() const;
    std::string str() const;

    /// Flat row-major list of points: the uniform endpoint-inclusive lattice,
    /// plus (when eps > 0) a patch of spacing eps^focus_rho/4 around the focus
    /// (the origin by default) so that eps-scale features are resolved.
    std::vector<double> lattice(double eps = 0.0) const;
};

struct DecaySamples {
    EpsGrid grid;
    std::vector<double> values;  // S_k, one per grid point
    std::vector<int> deriv;      // multi-index
    std::string where;           // compact set / test function description
};

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS of the log residuals
    int used = 0;           // number of nonzero tail samples
    bool all_zero = false;  // slope is +inf
};

struct Tolerances {
    double slope_tol = 0.25;
    double abs_floor = 1e-13;
    double m_max = 12.0;
    double n_max = 40.0;
};

enum class Outcome { ExactZero, Negligible, Moderate, Fails };

struct DecayVerdict {
    Outcome outcome = Outcome::Fails;
    double order = 0.0;  // m for Negligible, N for Moderate
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    int tail_begin = 0;  // grid level k of the first tail point
    int tail_end = 0;
    double tail_max = 0.0;
    std::string where;
    std::string note;

    bool passed() const { return outcome != Outcome::Fails; }
    std::string str() const;
};

const char* outcome_name(Outcome o);

/// Least squares fit of log S against log eps over the nonzero tail samples.
/// Throws InsufficientData with fewer than 4 nonzero tail samples (unless all
/// are zero, which gives slope +inf).
Fit fit_order(const DecaySamples& s);

DecayVerdict exact_zero(std::string where = {});
DecayVerdict verdict_negligible(const DecaySamples& s, double m, const Tolerances& tol = {});
/// N = max(0, ceil(-slope - slope_tol)) when slope >= -n_max.
DecayVerdict verdict_moderate(const DecaySamples& s, double n_max, const Tolerances& tol = {});

/// Most severe verdict; among equals the first one. Moderate verdicts with a
/// larger N count as more severe.
DecayVerdict worst(const std::vector<DecayVerdict>& verdicts);

/// S_k = max over the lattice of |d^deriv u_{eps_k}|. Overrides of the net are
/// honoured per level.
DecaySamples sample_sup(const Net& u, const CompactSet& K, const std::vector<int>& deriv, const EpsGrid& grid);

}  // namespace epsnet
