#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace epsnet {

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    int max_depth = 40;
    std::size_t max_evaluations = 4000000;  // refinement stops (unconverged) beyond this
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
    std::size_t evaluations = 0;
};

/// 20-point Gauss-Legendre on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection with 20-point Gauss-Legendre panels. Breakpoints inside
/// (a, b) split the range first. Summation order is fixed, so the result is
/// reproducible bit for bit.
QuadResult integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breaks = {},
                     const QuadOptions& opt = {});

}  // namespace epsnet
