#pragma once

#include "vsp/dynamics.hpp"

namespace vsp {

// ---------------------------------------------------------------------------
// A priori envelopes: from the problem data alone,
//   r(t) = |x0| exp(int gamma) + int (gamma(s) + |v'(s)| + R(s)) exp(int_s^t gamma) ds,
//   theta(t) = gamma(t)(1 + r(t)) + |v'(t)| + R(t),
// bound |x(t)| and |x'(t)| for the exact solution. The declared rate R stands
// in for |z'| throughout.
// ---------------------------------------------------------------------------

struct BoundEnvelope {
    Grid grid;
    std::vector<double> r;
    std::vector<double> theta;
    std::vector<double> gamma;
    double x0_norm = 0.0;  // inputs echo

    double r_final() const { return r.back(); }
};

BoundEnvelope compute_envelopes(const ProblemSpec& spec, const Grid& grid);

struct EnvelopeCheck {
    double r_margin = 0.0;      // min over nodes of r(t_k) - |x_k|
    double theta_margin = 0.0;  // min over steps of max(theta_k, theta_{k+1}) - |d_k|
    bool pass = false;
};

/// Discrete derivatives straddle two nodes, so they are compared against the
/// larger adjacent theta value plus the tolerance.
EnvelopeCheck check_envelopes(const Trajectory& traj, const BoundEnvelope& env, double tol);

// ---------------------------------------------------------------------------
// Continuous dependence on the data. Both problems must share the interval,
// the moving set, and the grid. Moduli entering the bound are taken as the
// pointwise max over the two problems so a single envelope dominates both.
// ---------------------------------------------------------------------------

enum class DependenceVariant { GeneralZ, SharedZ };

struct DependenceReport {
    Grid grid;
    DependenceVariant variant = DependenceVariant::GeneralZ;
    /// GeneralZ: bound on |x1 - x2|^2 (exponential of delta + Delta);
    /// SharedZ:  bound on |x1 - x2|   (exponential of delta/2, integrand Delta/sqrt(2)).
    std::vector<double> bound;
    std::vector<double> measured;  // |x1(t_k) - x2(t_k)|
    std::vector<double> Delta, delta, eps, nu;
    double margin = 0.0;  // min of bound - measured^2 (GeneralZ) or bound - measured (SharedZ)
    bool sup_estimated = false;  // d_r/D_r sampled (non-affine data) rather than exact
};

DependenceReport dependence_bound(const ProblemSpec& p1, const ProblemSpec& p2,
                                  const Trajectory& x1, const Trajectory& x2,
                                  DependenceVariant variant);

// ---------------------------------------------------------------------------
// Slow-solution residual: for a fixed convex set, the solution's velocity is
// the tangent-cone projection of the forcing; the per-node defect
//   |d_k - proj_{T_C(x_k)}(f(t_k,x_k) + int g)|
// vanishes with the step size exactly when the trajectory solves the
// projected dynamical system.
// ---------------------------------------------------------------------------

struct SlowResidual {
    Grid grid;
    std::vector<double> residual;  // per node, forward-difference nodes only
    double max_residual = 0.0;
};

SlowResidual slow_residual(const Trajectory& traj, const ProblemSpec& spec);

}  // namespace vsp
