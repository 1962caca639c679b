#include "vsp/analysis.hpp"

#include <cmath>

namespace vsp {

BoundEnvelope compute_envelopes(const ProblemSpec& spec, const Grid& grid) {
    validate_grid(grid);
    BoundEnvelope env;
    env.grid = grid;
    env.gamma = gamma_curve(spec, grid);
    env.x0_norm = spec.x0.norm();

    const std::size_t n = grid.size();
    std::vector<double> eps(n), vdot(n), rate(n);
    for (std::size_t i = 0; i < n; ++i) {
        vdot[i] = spec.set.vdot_abs(grid[i]);
        rate[i] = spec.z_rate ? spec.z_rate(grid[i]) : spec.z.rate_bound(grid[i]);
        eps[i] = env.gamma[i] + vdot[i] + rate[i];
    }
    env.r = exp_bound_curve(grid, env.gamma, eps, env.x0_norm);
    env.theta.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        env.theta[i] = env.gamma[i] * (1.0 + env.r[i]) + vdot[i] + rate[i];
    return env;
}

EnvelopeCheck check_envelopes(const Trajectory& traj, const BoundEnvelope& env, double tol) {
    if (traj.grid.size() != env.grid.size())
        throw GridMismatch("check_envelopes: trajectory and envelope grids differ");
    EnvelopeCheck check;
    double r_margin = std::numeric_limits<double>::infinity();
    double theta_margin = r_margin;
    for (std::size_t k = 0; k < traj.states.size(); ++k)
        r_margin = std::min(r_margin, env.r[k] - traj.states[k].norm());
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k)
        theta_margin = std::min(theta_margin, std::max(env.theta[k], env.theta[k + 1]) -
                                                  traj.derivs[k].norm());
    check.r_margin = r_margin;
    check.theta_margin = theta_margin;
    check.pass = r_margin >= -tol && theta_margin >= -tol;
    return check;
}

namespace {

// sup over the radius-r ball of the forcing/kernel difference; exact for the
// affine built-ins via operator norms, Halton-sampled (and flagged) otherwise.
struct ForcingGap {
    const Forcing &f1, &f2;
    double r;
    const std::vector<Vec>& samples;
    bool* estimated;
    double op_norm = 0.0;

    ForcingGap(const Forcing& a, const Forcing& b, double radius,
               const std::vector<Vec>& pts, bool* flag)
        : f1(a), f2(b), r(radius), samples(pts), estimated(flag) {
        if (f1.affine && f2.affine) op_norm = operator_norm(Mat(f1.affine->A - f2.affine->A));
    }

    double operator()(double t) const {
        if (f1.affine && f2.affine)
            return op_norm * r + (f1.affine->b.value(t) - f2.affine->b.value(t)).norm();
        *estimated = true;
        double sup = 0.0;
        for (const Vec& x : samples) sup = std::max(sup, (f1.eval(t, x) - f2.eval(t, x)).norm());
        return sup;
    }
};

struct KernelGap {
    const VolterraKernel &g1, &g2;
    double r;
    const std::vector<Vec>& samples;
    bool* estimated;
    bool same_B = false;
    double norm_B = 0.0;

    KernelGap(const VolterraKernel& a, const VolterraKernel& b, double radius,
              const std::vector<Vec>& pts, bool* flag)
        : g1(a), g2(b), r(radius), samples(pts), estimated(flag) {
        if (g1.separable && g2.separable) {
            same_B = (g1.separable->B - g2.separable->B).norm() == 0.0;
            if (same_B) norm_B = operator_norm(g1.separable->B);
        }
    }

    double operator()(double t, double s) const {
        if (g1.separable && g2.separable) {
            const double c1 = g1.separable->coef.eval(t, s);
            const double c2 = g2.separable->coef.eval(t, s);
            const double op = same_B ? std::abs(c1 - c2) * norm_B
                                     : operator_norm(Mat(c1 * g1.separable->B - c2 * g2.separable->B));
            return op * r + (c1 * g1.separable->c - c2 * g2.separable->c).norm();
        }
        *estimated = true;
        double sup = 0.0;
        for (const Vec& x : samples)
            sup = std::max(sup, (g1.eval(t, s, x) - g2.eval(t, s, x)).norm());
        return sup;
    }
};

}  // namespace

DependenceReport dependence_bound(const ProblemSpec& p1, const ProblemSpec& p2,
                                  const Trajectory& x1, const Trajectory& x2,
                                  DependenceVariant variant) {
    if (x1.grid.size() != x2.grid.size())
        throw GridMismatch("dependence_bound: trajectories on different grids");
    const Grid& grid = x1.grid;
    validate_grid(grid);
    const std::size_t n = grid.size();

    if (variant == DependenceVariant::SharedZ) {
        for (double t : {grid.front(), 0.5 * (grid.front() + grid.back()), grid.back()})
            if ((p1.z.value(t) - p2.z.value(t)).norm() > 1e-12)
                throw VariantMismatch("shared-z variant requested but the z paths differ");
    }

    DependenceReport report;
    report.grid = grid;
    report.variant = variant;

    // envelope dominating both problems: pointwise-max moduli
    const auto gamma1 = gamma_curve(p1, grid);
    const auto gamma2 = gamma_curve(p2, grid);
    std::vector<double> gamma(n), vdot(n), rate(n), eps_env(n);
    for (std::size_t i = 0; i < n; ++i) {
        gamma[i] = std::max(gamma1[i], gamma2[i]);
        vdot[i] = p1.set.vdot_abs(grid[i]);
        const double r1 = p1.z_rate ? p1.z_rate(grid[i]) : p1.z.rate_bound(grid[i]);
        const double r2 = p2.z_rate ? p2.z_rate(grid[i]) : p2.z.rate_bound(grid[i]);
        rate[i] = std::max(r1, r2);
        eps_env[i] = gamma[i] + vdot[i] + rate[i];
    }
    const double x0_norm = std::max(p1.x0.norm(), p2.x0.norm());
    const auto r_env = exp_bound_curve(grid, gamma, eps_env, x0_norm);
    const double r_T = std::max(r_env.back(), 1e-12);

    const double inv_rho = p1.set.convex() ? 0.0 : 1.0 / p1.set.prox_constant;
    const auto samples = halton_ball_points(p1.dim(), r_T, 256);

    report.nu.resize(n);
    report.delta.resize(n);
    report.Delta.resize(n);
    report.eps.resize(n);
    report.measured.resize(n);

    bool estimated = false;
    const ForcingGap forcing_gap(p1.forcing, p2.forcing, r_T, samples, &estimated);
    const KernelGap kernel_gap(p1.kernel, p2.kernel, r_T, samples, &estimated);

    std::vector<double> mu_max(n), d_gap(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid[i];
        report.nu[i] = 0.5 * gamma[i] * (1.0 + r_env[i]) + vdot[i] + rate[i];
        mu_max[i] = std::max(p1.kernel.mu(r_T, t), p2.kernel.mu(r_T, t));
        d_gap[i] = forcing_gap(t);
        report.measured[i] = (x1.states[i] - x2.states[i]).norm();
    }
    const auto mu_prefix = trapezoid_prefix(grid, mu_max);
    const auto big_gap = volterra_row_integrals(
        grid, [&](double t, double s) { return kernel_gap(t, s); });
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid[i];
        const double kappa = std::max(p1.forcing.kappa(r_T, t), p2.forcing.kappa(r_T, t));
        report.Delta[i] = std::sqrt(2.0) * (d_gap[i] + big_gap[i]);
        report.delta[i] = 2.0 * report.nu[i] * inv_rho + 2.0 * kappa + 2.0 * mu_prefix[i];
        report.eps[i] = 2.0 * report.nu[i] * (p1.z.value(t) - p2.z.value(t)).norm();
    }
    report.sup_estimated = estimated;

    const double d0 = (p1.x0 - p2.x0).norm();
    if (variant == DependenceVariant::GeneralZ) {
        std::vector<double> expo(n), integrand(n);
        for (std::size_t i = 0; i < n; ++i) {
            expo[i] = report.delta[i] + report.Delta[i];
            integrand[i] = 2.0 * (report.eps[i] + report.Delta[i]);
        }
        report.bound = exp_bound_curve(grid, expo, integrand, d0 * d0);
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            margin = std::min(margin, report.bound[i] - report.measured[i] * report.measured[i]);
        report.margin = margin;
    } else {
        // tight form of the shared-z bound: the squared-distance differential
        // inequality halves the coefficients when passed to the plain norm
        std::vector<double> expo(n), integrand(n);
        for (std::size_t i = 0; i < n; ++i) {
            expo[i] = 0.5 * report.delta[i];
            integrand[i] = report.Delta[i] / std::sqrt(2.0);
        }
        report.bound = exp_bound_curve(grid, expo, integrand, d0);
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i)
            margin = std::min(margin, report.bound[i] - report.measured[i]);
        report.margin = margin;
    }
    return report;
}

SlowResidual slow_residual(const Trajectory& traj, const ProblemSpec& spec) {
    if (!spec.set.convex() || !spec.set.time_independent())
        throw UnsupportedKind("slow residual needs a fixed convex set");
    if (!spec.z.constant())
        throw UnsupportedKind("slow residual needs a constant perturbation path");
    const Vec z0 = spec.z.value(spec.T0);

    SlowResidual out;
    out.grid = traj.grid;
    const std::size_t n = traj.states.size();
    out.residual.assign(n, 0.0);
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double t = traj.grid[k];
        const Vec h = spec.forcing.eval(t, traj.states[k]) +
                      accumulate_volterra(spec.kernel, traj.grid, traj.states, t);
        const Vec tangential =
            tangent_projection(spec.set, t, Vec(traj.states[k] - z0), h, 1e-7);
        out.residual[k] = (traj.derivs[k] - tangential).norm();
        worst = std::max(worst, out.residual[k]);
    }
    out.max_residual = worst;
    return out;
}

}  // namespace vsp
