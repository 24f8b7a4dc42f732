#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace soliton::numerics {

/// Finite-difference weights for the d-th derivative at point z from
/// arbitrary nodes (Fornberg's recursion). weights.size() == nodes.size().
std::vector<double> fornberg_weights(double z, const std::vector<double>& nodes, int order);

/// First derivative of sampled data on an arbitrary strictly increasing grid,
/// using sliding stencils of (up to) `stencil` nodes. Interior points use a
/// centered stencil; edges fall back to one-sided stencils of the same size.
std::vector<double> derivative_on_grid(const std::vector<double>& t,
                                       const std::vector<double>& f,
                                       int stencil = 7);

/// Adaptive Gauss-Kronrod 15(7) quadrature of f over [a, b].
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-13, double rel_tol = 1e-13, int max_depth = 40);

/// Bisection on [lo, hi]; requires f(lo) and f(hi) of opposite (non-strict)
/// sign. Runs until the interval collapses to adjacent doubles or max_iter.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              int max_iter = 200);

/// Least-squares fit of y ~ c0 + c1 * g on given samples (2x2 normal
/// equations, accumulated in long double).
struct LinearFit {
  double c0 = 0.0;
  double c1 = 0.0;
};
LinearFit fit_affine(const std::vector<double>& g, const std::vector<double>& y);

/// Uniform grid of n points on [0, span] whose spacing is snapped to a
/// 40-bit mantissa, so every node i*h and its reflection (n-1-i)*h are exact
/// products and the reflection t -> (n-1)h - t is lossless in doubles.
/// The last node therefore undershoots `span` by at most span*2^-40.
std::vector<double> reflection_safe_grid(double span, std::size_t n);

/// Cubic Hermite evaluation on [t0, t1] from endpoint values and slopes.
double hermite(double t, double t0, double t1, double f0, double f1, double d0, double d1);
double hermite_derivative(double t, double t0, double t1, double f0, double f1, double d0,
                          double d1);

} // namespace soliton::numerics
