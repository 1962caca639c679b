#pragma once

#include "vsp/types.hpp"

#include <functional>
#include <span>

namespace vsp {

using ScalarFn = std::function<double(double)>;
using Kernel2Fn = std::function<double(double, double)>;

std::vector<double> sample(const ScalarFn& f, const Grid& grid);

/// Trapezoid prefix sums: out[i] = integral of the sampled values from grid[0] to grid[i].
std::vector<double> trapezoid_prefix(const Grid& grid, std::span<const double> values);

/// Trapezoid over the whole grid of nodal values.
double trapezoid(const Grid& grid, std::span<const double> values);

/// Volterra row integrals: out[i] = trapezoid over s in [grid[0], grid[i]] of k(grid[i], s).
/// O(n^2); the outer time changes per row so no prefix sum applies.
/// With require_nonneg, a sampled k < 0 raises NegativeCoefficient.
std::vector<double> volterra_row_integrals(const Grid& grid, const Kernel2Fn& k,
                                           bool require_nonneg = false);

/// Shared core of every exponential bound curve in this library:
///
///   out[i] = rho0 * exp(P_i) + trapezoid over s <= t_i of eps(s) * exp(P_i - P_s),
///
/// with P the trapezoid prefix of gamma. Evaluated by the recurrence
/// S_{i+1} = e^{dP} S_i + (h/2)(eps_i e^{dP} + eps_{i+1}), which reproduces the
/// trapezoid sum exactly and keeps every exponential increment small.
std::vector<double> exp_bound_curve(const Grid& grid, std::span<const double> gamma,
                                    std::span<const double> eps, double rho0);

/// Spectral norm via power iteration on A^T A (50 iterations, 1e-12 stop).
double operator_norm(const Mat& A);

/// Deterministic low-discrepancy points inside the radius-r ball (Halton bases);
/// every other point is pushed to the boundary so sup estimates see the sphere.
std::vector<Vec> halton_ball_points(int dim, double radius, int count);

}  // namespace vsp
