#include "vsp/solver.hpp"

#include <cmath>

namespace vsp {

Grid SolverConfig::make_grid(double T0, double T) const {
    if (!explicit_grid.empty()) {
        validate_grid(explicit_grid);
        return explicit_grid;
    }
    if (n < 2) throw std::invalid_argument("solver grid needs n >= 2");
    return uniform_grid(T0, T, n);
}

namespace {

Vec project_shifted(const MovingSet& set, const Path& z, double t, const Vec& x) {
    const Vec shift = z.value(t);
    return shift + project(set, t, Vec(x - shift));
}

void require_feasible_start(const ProblemSpec& spec, double tol_feas) {
    const Vec zx = spec.x0 - spec.z.value(spec.T0);
    const double gap = distance(spec.set, spec.T0, zx);
    if (gap > tol_feas)
        throw InfeasibleStart("x0 is not in C(T0) + z(T0): dist = " + std::to_string(gap));
}

}  // namespace

Trajectory catching_up(const ProblemSpec& spec, const SolverConfig& config) {
    const Grid grid = config.make_grid(spec.T0, spec.T);
    require_feasible_start(spec, config.tol_feas);

    Trajectory traj;
    traj.grid = grid;
    traj.provenance = Provenance::CatchingUp;
    traj.states.reserve(grid.size());
    traj.states.push_back(spec.x0);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double t = grid[k];
        const double h = grid[k + 1] - t;
        const Vec forcing = spec.forcing.eval(t, traj.states[k]) +
                            accumulate_volterra(spec.kernel, grid, traj.states, t);
        const Vec predictor = traj.states[k] + h * forcing;
        traj.states.push_back(project_shifted(spec.set, spec.z, grid[k + 1], predictor));
    }
    fill_derivatives(traj);
    return traj;
}

InnerSweepResult solve_inner_sweeping(const MovingSet& set, const Path& z, const ScalarFn& z_rate,
                                      const std::vector<Vec>& h_values, const Grid& grid,
                                      const Vec& x_start) {
    validate_grid(grid);
    if (h_values.size() != grid.size())
        throw GridMismatch("solve_inner_sweeping: forcing curve and grid sizes differ");

    InnerSweepResult out;
    out.traj.grid = grid;
    out.traj.provenance = Provenance::FixedPoint;
    out.traj.states.reserve(grid.size());
    out.traj.states.push_back(x_start);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double h = grid[k + 1] - grid[k];
        const Vec predictor = out.traj.states[k] + h * h_values[k];
        out.traj.states.push_back(project_shifted(set, z, grid[k + 1], predictor));
    }
    fill_derivatives(out.traj);

    double margin = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double t = grid[k];
        const double rate = z_rate ? z_rate(t) : z.rate_bound(t);
        const double lhs = (out.traj.derivs[k] - h_values[k]).norm();
        const double rhs = h_values[k].norm() + set.vdot_abs(t) + rate;
        margin = std::max(margin, lhs - rhs);
    }
    out.lemma_margin = margin;
    return out;
}

namespace {

// One sweep of the solution operator. All node times carry both the original
// time t (sets, evaluators) and the transformed time tau (step sizes); in the
// direct mode tau == t and phi == 1, so the 1/phi factors are no-ops.
struct OperatorFrame {
    const ProblemSpec& spec;
    const Grid& t_grid;
    const Grid& tau_grid;
    const std::vector<double>& phi;
    const std::vector<double>& radius;  // truncation radii r(t_k)

    std::vector<Vec> apply(const std::vector<Vec>& y) const {
        const std::size_t n = t_grid.size();
        const int d = spec.dim();

        std::vector<Vec> truncated(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double norm = y[k].norm();
            truncated[k] = (norm > radius[k] && norm > 0.0) ? Vec(y[k] * (radius[k] / norm)) : y[k];
        }

        // forcing values h(y)(tau_k), Volterra tail accumulated in tau
        const bool skip_memory = is_zero_kernel(spec.kernel);
        std::vector<Vec> h(n, Vec::Zero(d));
        std::vector<Vec> g_row(n, Vec::Zero(d));
        for (std::size_t k = 0; k < n; ++k) {
            const double tk = t_grid[k];
            Vec acc = Vec::Zero(d);
            if (!skip_memory) {
                for (std::size_t j = 0; j <= k; ++j)
                    g_row[j] = spec.kernel.eval(tk, t_grid[j], truncated[j]) / (phi[k] * phi[j]);
                for (std::size_t j = 1; j <= k; ++j)
                    acc += 0.5 * (tau_grid[j] - tau_grid[j - 1]) * (g_row[j - 1] + g_row[j]);
            }
            h[k] = spec.forcing.eval(tk, truncated[k]) / phi[k] + acc;
        }

        std::vector<Vec> w;
        w.reserve(n);
        w.push_back(spec.x0);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double step = tau_grid[k + 1] - tau_grid[k];
            const Vec predictor = w[k] + step * h[k];
            w.push_back(project_shifted(spec.set, spec.z, t_grid[k + 1], predictor));
        }
        return w;
    }
};

double sup_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, (a[i] - b[i]).norm());
    return sup;
}

}  // namespace

FixedPointResult fixed_point_solve(const ProblemSpec& spec, const SolverConfig& config) {
    const Grid grid = config.make_grid(spec.T0, spec.T);
    require_feasible_start(spec, config.tol_feas);

    const BoundEnvelope env = compute_envelopes(spec, grid);

    Grid tau_grid = grid;
    std::vector<double> phi(grid.size(), 1.0);
    if (config.reparametrize) {
        const PhiReparam reparam = phi_reparametrization(spec, env.r_final(), grid);
        phi = reparam.phi;
        tau_grid = reparam.transformed;
    }
    const OperatorFrame frame{spec, grid, tau_grid, phi, env.r};

    FixedPointReport report;
    std::vector<Vec> start(grid.size(), spec.x0);
    std::vector<Vec> image = frame.apply(start);
    report.deltas.push_back(sup_distance(image, start));
    report.iterations = 1;

    // accept the iterate once both its step delta and its own residual (the
    // next application's delta) are below tolerance; the validating
    // application is not counted as an iteration
    while (true) {
        std::vector<Vec> next = frame.apply(image);
        const double delta = sup_distance(next, image);
        if (report.deltas.back() <= config.tol_fp && delta <= config.tol_fp) {
            report.converged = true;
            report.residual = delta;
            break;
        }
        if (report.iterations >= config.max_iterations)
            throw NoConvergence("fixed-point iteration did not converge in " +
                                    std::to_string(config.max_iterations) + " iterations (last delta " +
                                    std::to_string(delta) + ")",
                                report);
        report.deltas.push_back(delta);
        ++report.iterations;
        image = std::move(next);
    }

    FixedPointResult result;
    result.traj.grid = grid;
    result.traj.states = std::move(image);
    result.traj.provenance = Provenance::FixedPoint;
    fill_derivatives(result.traj);
    result.report = std::move(report);
    return result;
}

Trajectory reference_solve(const ProblemSpec& spec, const Grid& coarse, int fine_factor) {
    if (fine_factor < 4) throw std::invalid_argument("reference_solve: fine_factor >= 4");
    validate_grid(coarse);
    SolverConfig fine_config;
    fine_config.explicit_grid = refine_grid(coarse, fine_factor);
    Trajectory fine = catching_up(spec, fine_config);

    Trajectory traj;
    traj.grid = coarse;
    traj.provenance = Provenance::Reference;
    traj.states.reserve(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i)
        traj.states.push_back(fine.states[i * static_cast<std::size_t>(fine_factor)]);
    fill_derivatives(traj);
    return traj;
}

}  // namespace vsp
