#pragma once

#include "vsp/analysis.hpp"
#include "vsp/dynamics.hpp"

namespace vsp {

enum class Scheme { CatchingUp, FixedPoint };

struct SolverConfig {
    Scheme scheme = Scheme::CatchingUp;
    int n = 200;         // uniform intervals when explicit_grid is empty
    Grid explicit_grid;  // optional non-uniform grid
    double tol_fp = 1e-8;
    int max_iterations = 50;
    double tol_feas = 1e-9;
    bool reparametrize = false;

    Grid make_grid(double T0, double T) const;
};

struct FixedPointReport {
    int iterations = 0;
    std::vector<double> deltas;  // per-iteration sup-norm changes
    bool converged = false;
    double residual = 0.0;  // |F(y*) - y*|_inf measured at the returned iterate
};

struct NoConvergence : std::runtime_error {
    FixedPointReport report;
    NoConvergence(const std::string& msg, FixedPointReport r)
        : std::runtime_error(msg), report(std::move(r)) {}
};

/// Explicit catching-up: x_{k+1} projects x_k + h_k (f(t_k,x_k) + int g) onto
/// C(t_{k+1}) + z(t_{k+1}). Forcing is evaluated at the left node, which keeps
/// the Volterra accumulation causal. Every produced state is feasible by
/// construction.
Trajectory catching_up(const ProblemSpec& spec, const SolverConfig& config);

struct InnerSweepResult {
    Trajectory traj;
    /// worst over steps of |d_k - h_k| - (|h_k| + |v'(t_k)| + R(t_k)); the
    /// discrete velocity bound says this stays O(h).
    double lemma_margin = 0.0;
};

/// Catching-up with frozen per-node forcing values.
InnerSweepResult solve_inner_sweeping(const MovingSet& set, const Path& z, const ScalarFn& z_rate,
                                      const std::vector<Vec>& h_values, const Grid& grid,
                                      const Vec& x_start);

struct FixedPointResult {
    Trajectory traj;
    FixedPointReport report;
};

/// Picard iteration on the history-dependent solution operator: truncate the
/// iterate into the a priori ball r(t)B, rebuild the forcing, and solve the
/// inner sweeping problem. Starts from the constant x0 curve and stops once
/// both the step delta and the fixed-point residual fall below tol_fp. With
/// config.reparametrize the loop runs on the Phi-transformed grid (steps
/// scaled by phi, forcing by 1/phi) and is mapped back node-by-node.
FixedPointResult fixed_point_solve(const ProblemSpec& spec, const SolverConfig& config);

/// Catching-up on a grid refined by fine_factor, restricted to the coarse nodes.
Trajectory reference_solve(const ProblemSpec& spec, const Grid& coarse, int fine_factor);

}  // namespace vsp
