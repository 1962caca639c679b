#include "vsp/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace vsp {

Forcing affine_forcing(Mat A, Path b) {
    const double a_norm = operator_norm(A);
    Forcing f;
    f.eval = [A, b](double t, const Vec& x) -> Vec { return A * x + b.value(t); };
    f.beta = [a_norm, b](double t) { return std::max(a_norm, b.value(t).norm()); };
    f.kappa = [a_norm](double, double) { return a_norm; };
    f.affine = AffineForcingData{std::move(A), std::move(b)};
    return f;
}

Forcing zero_forcing(int dim) {
    return affine_forcing(Mat::Zero(dim, dim), Path::zero(dim));
}

double KernelCoef::eval(double t, double s) const {
    switch (kind) {
        case Kind::Constant: return k0;
        case Kind::Affine: return k0 + kt * t + ks * s;
        case Kind::ExpDecay: return k0 * std::exp(-lambda * (t - s));
    }
    return 0.0;
}

double KernelCoef::sup_abs_over_s(double T0, double t) const {
    switch (kind) {
        case Kind::Constant: return std::abs(k0);
        case Kind::Affine:  // affine in s: extremum at an endpoint
            return std::max(std::abs(eval(t, T0)), std::abs(eval(t, t)));
        case Kind::ExpDecay: return std::abs(k0);  // lambda >= 0, peak at s = t
    }
    return 0.0;
}

KernelCoef KernelCoef::constant(double value) { return {Kind::Constant, value, 0.0, 0.0, 0.0}; }

KernelCoef KernelCoef::affine(double k0, double kt, double ks) {
    return {Kind::Affine, k0, kt, ks, 0.0};
}

KernelCoef KernelCoef::exp_decay(double k0, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("exp_decay kernel needs lambda >= 0");
    return {Kind::ExpDecay, k0, 0.0, 0.0, lambda};
}

VolterraKernel separable_kernel(KernelCoef coef, Mat B, Vec c, double T0) {
    const double b_norm = operator_norm(B);
    const double scale = std::max(b_norm, c.norm());
    VolterraKernel g;
    g.eval = [coef, B, c](double t, double s, const Vec& x) -> Vec {
        return coef.eval(t, s) * (B * x + c);
    };
    g.sigma = [coef, scale](double t, double s) { return std::abs(coef.eval(t, s)) * scale; };
    g.mu = [coef, b_norm, T0](double, double t) { return coef.sup_abs_over_s(T0, t) * b_norm; };
    g.separable = SeparableKernelData{coef, std::move(B), std::move(c)};
    return g;
}

VolterraKernel zero_kernel(int dim) {
    return separable_kernel(KernelCoef::constant(0.0), Mat::Zero(dim, dim), Vec::Zero(dim));
}

bool is_zero_kernel(const VolterraKernel& kernel) {
    if (!kernel.separable) return false;
    const auto& s = *kernel.separable;
    const bool zero_coef = s.coef.k0 == 0.0 && s.coef.kt == 0.0 && s.coef.ks == 0.0;
    const bool zero_field = s.B.norm() == 0.0 && s.c.norm() == 0.0;
    return zero_coef || zero_field;
}

void fill_derivatives(Trajectory& traj) {
    const std::size_t n = traj.states.size();
    traj.derivs.resize(n);
    for (std::size_t k = 0; k + 1 < n; ++k)
        traj.derivs[k] = (traj.states[k + 1] - traj.states[k]) / (traj.grid[k + 1] - traj.grid[k]);
    if (n >= 2) traj.derivs[n - 1] = traj.derivs[n - 2];
    else if (n == 1) traj.derivs[0] = Vec::Zero(traj.states[0].size());
}

Vec accumulate_volterra(const VolterraKernel& kernel, const Grid& grid,
                        const std::vector<Vec>& states, double t) {
    const std::size_t idx = node_index(grid, t);
    if (states.size() <= idx) throw GridMismatch("accumulate_volterra: trajectory prefix too short");
    const int d = static_cast<int>(states[0].size());
    Vec acc = Vec::Zero(d);
    if (idx == 0 || is_zero_kernel(kernel)) return acc;
    const double t_node = grid[idx];  // so the kernel never sees s > t, even by an ulp
    Vec prev = kernel.eval(t_node, grid[0], states[0]);
    for (std::size_t j = 1; j <= idx; ++j) {
        Vec cur = kernel.eval(t_node, grid[j], states[j]);
        acc += 0.5 * (grid[j] - grid[j - 1]) * (prev + cur);
        prev = std::move(cur);
    }
    return acc;
}

std::vector<double> gamma_curve(const ProblemSpec& spec, const Grid& grid) {
    validate_grid(grid);
    const auto sigma_rows = volterra_row_integrals(grid, spec.kernel.sigma);
    std::vector<double> gamma(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        gamma[i] = 2.0 * spec.forcing.beta(grid[i]) + 2.0 * sigma_rows[i];
    return gamma;
}

PhiReparam phi_reparametrization(const ProblemSpec& spec, double r_T, const Grid& grid) {
    if (!(r_T > 0.0)) throw std::invalid_argument("phi_reparametrization: r_T > 0 required");
    validate_grid(grid);
    const auto sigma_rows = volterra_row_integrals(grid, spec.kernel.sigma);
    PhiReparam out;
    out.phi.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        out.phi[i] = std::max({1.0, spec.forcing.kappa(r_T, t), spec.kernel.mu(r_T, t),
                               spec.forcing.beta(t), sigma_rows[i]});
    }
    const auto prefix = trapezoid_prefix(grid, out.phi);
    out.transformed = Grid(prefix.begin(), prefix.end());
    return out;
}

void validate_moduli(const ProblemSpec& spec, int time_samples, int space_samples) {
    const int d = spec.dim();
    const double r_test = std::max(2.0, 2.0 * (1.0 + spec.x0.norm()));
    const auto points = halton_ball_points(d, r_test, space_samples);
    const double tol = 1e-9;

    auto fail = [](const char* which, double t, const Vec& x, double lhs, double rhs) {
        std::ostringstream msg;
        msg << which << " modulus violated at t = " << t << ", x = [";
        for (Eigen::Index i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x(i);
        msg << "]: value " << lhs << " exceeds declared bound " << rhs;
        throw ModulusViolation(msg.str());
    };

    for (int i = 0; i < time_samples; ++i) {
        const double t = spec.T0 + (spec.T - spec.T0) * i / std::max(1, time_samples - 1);
        const double beta = spec.forcing.beta(t);
        const double kappa = spec.forcing.kappa(r_test, t);
        for (const Vec& x : points) {
            const double growth = spec.forcing.eval(t, x).norm();
            if (growth > beta * (1.0 + x.norm()) + tol)
                fail("growth (H^f)", t, x, growth, beta * (1.0 + x.norm()));
        }
        for (std::size_t a = 0; a + 1 < points.size(); a += 2) {
            const Vec& x = points[a];
            const Vec& y = points[a + 1];
            const double lip = (spec.forcing.eval(t, x) - spec.forcing.eval(t, y)).norm();
            if (lip > kappa * (x - y).norm() + tol)
                fail("Lipschitz (H^f)", t, x, lip, kappa * (x - y).norm());
        }
        // kernel inequalities on the triangle s <= t
        const double mu = spec.kernel.mu(r_test, t);
        for (int j = 0; j <= i; ++j) {
            const double s = spec.T0 + (spec.T - spec.T0) * j / std::max(1, time_samples - 1);
            const double sigma = spec.kernel.sigma(t, s);
            if (sigma < 0.0) fail("sigma sign (H^g)", t, points[0], sigma, 0.0);
            const Vec& x = points[static_cast<std::size_t>(j) % points.size()];
            const double growth = spec.kernel.eval(t, s, x).norm();
            if (growth > sigma * (1.0 + x.norm()) + tol)
                fail("growth (H^g)", t, x, growth, sigma * (1.0 + x.norm()));
            const Vec& y = points[static_cast<std::size_t>(j + 7) % points.size()];
            const double lip = (spec.kernel.eval(t, s, x) - spec.kernel.eval(t, s, y)).norm();
            if (lip > mu * (x - y).norm() + tol)
                fail("Lipschitz (H^g)", t, x, lip, mu * (x - y).norm());
        }
    }
}

}  // namespace vsp
