#pragma once

// Zero divisors of the one-dimensional algebra: windows of super-polynomial
// smallness along a subsequence of the eps grid, and the bump witness g with
// f g = 0 but g != 0.

#include "epsnet/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace epsnet {

struct WindowReport {
    bool found = false;
    double rho = 1.0;
    int budget = 12;
    EpsGrid grid;
    CompactSet K;
    // the subsequence
    std::vector<int> levels;  // grid levels k_1 < k_2 < ...
    std::vector<double> centers;
    std::vector<double> half_widths;  // eps_k^rho
    std::vector<int> orders;          // max j <= budget with sup |f| < eps^j on the window
    // best window per grid level, before the subsequence is assembled
    std::vector<double> level_centers;
    std::vector<int> level_orders;

    std::string str() const;
};

/// Scan every grid level for the window of half-width eps^rho inside K with
/// the highest smallness order, then keep the longest subsequence whose n-th
/// member reaches order min(n, budget). Found when it has at least 4 members
/// and the last one reaches the budget.
WindowReport find_small_windows(const Net& f, const CompactSet& K, double rho, int budget, const EpsGrid& grid = {});

/// e * bump((x - x_k) / eps_k^rho) on the subsequence levels, 0 elsewhere.
Net build_witness(const WindowReport& w);

/// K with its sampling patch focused on each distinct window centre.
std::vector<CompactSet> window_sets(const WindowReport& w);

struct ZeroDivisorVerdict {
    bool is_zero_divisor = false;
    WindowReport report;           // the successful one, or the last rung tried
    std::optional<Net> witness;
    DecayVerdict product;          // equals(f g, 0) at order 12
    DecayVerdict witness_nonzero;  // equals(g, 0), expected to fail
    std::vector<double> rhos_tried;
    std::string str() const;
};

inline const std::vector<double> kRhoLadder{0.5, 1.0, 2.0, 4.0};

/// With no rho the ladder is searched in order.
ZeroDivisorVerdict zero_divisor_verdict(const Net& f, const CompactSet& K, std::optional<double> rho, int budget,
                                        const EpsGrid& grid = {});

}  // namespace epsnet
