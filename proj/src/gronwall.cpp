#include "vsp/gronwall.hpp"

#include <cmath>

namespace vsp {

namespace {

ScalarFn zero_fn() {
    return [](double) { return 0.0; };
}
ScalarFn const_fn(double c) {
    return [c](double) { return c; };
}

std::vector<double> sample_nonneg(const ScalarFn& f, const Grid& grid, const char* name) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        v[i] = f ? f(grid[i]) : 0.0;
        if (v[i] < 0.0)
            throw NegativeCoefficient(std::string(name) + " negative at t = " + std::to_string(grid[i]));
    }
    return v;
}

void check_finite(const std::vector<double>& values) {
    for (double v : values)
        if (!std::isfinite(v)) throw std::runtime_error("bound curve overflowed to non-finite values");
}

Grid coarsen(const Grid& grid) {
    Grid half;
    half.reserve(grid.size() / 2 + 1);
    for (std::size_t i = 0; i < grid.size(); i += 2) half.push_back(grid[i]);
    return half;
}

using CurveFn = std::vector<double> (*)(const GronwallData&, const Grid&);

BoundCurve assemble(const GronwallData& data, const Grid& grid, GronwallVariant variant,
                    CurveFn compute) {
    validate_grid(grid);
    BoundCurve curve;
    curve.grid = grid;
    curve.variant = variant;
    curve.values = compute(data, grid);
    curve.quadrature_step = max_step(grid);
    check_finite(curve.values);
    if ((grid.size() - 1) % 2 == 0 && grid.size() >= 5) {
        const auto coarse = compute(data, coarsen(grid));
        curve.quadrature_error_estimate = std::abs(curve.values.back() - coarse.back()) / 3.0;
    }
    return curve;
}

std::vector<double> curve_I(const GronwallData& data, const Grid& grid) {
    const auto k1 = sample_nonneg(data.K1, grid, "K1");
    const auto k2 = sample_nonneg(data.K2, grid, "K2");
    const auto eps = sample_nonneg(data.eps, grid, "eps");
    const auto rows = data.K3_ts ? volterra_row_integrals(grid, data.K3_ts, true)
                                 : std::vector<double>(grid.size(), 0.0);
    std::vector<double> gamma(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) gamma[i] = k1[i] + k2[i] * rows[i];
    return exp_bound_curve(grid, gamma, eps, data.rho0);
}

std::vector<double> gamma_II(const GronwallData& data, const Grid& grid,
                             std::vector<double>* k1_out) {
    const auto k1 = sample_nonneg(data.K1, grid, "K1");
    const auto k2 = sample_nonneg(data.K2, grid, "K2");
    const auto k3 = sample_nonneg(data.K3, grid, "K3");
    const auto k4 = sample_nonneg(data.K4, grid, "K4");
    const auto k4_prefix = trapezoid_prefix(grid, k4);
    std::vector<double> gamma(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) gamma[i] = k2[i] + k3[i] * k4_prefix[i];
    if (k1_out) *k1_out = k1;
    return gamma;
}

std::vector<double> curve_IIa(const GronwallData& data, const Grid& grid) {
    std::vector<double> k1;
    auto gamma = gamma_II(data, grid, &k1);
    auto eps = sample_nonneg(data.eps, grid, "eps");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        gamma[i] += k1[i];
        eps[i] += k1[i];
    }
    return exp_bound_curve(grid, gamma, eps, data.rho0);
}

std::vector<double> curve_IIb(const GronwallData& data, const Grid& grid) {
    for (double t : grid)
        if (data.eps && std::abs(data.eps(t)) > 1e-14)
            throw EpsilonNotZero("sqrt-form bound requires eps == 0; eps(" + std::to_string(t) +
                                 ") = " + std::to_string(data.eps(t)));
    std::vector<double> k1;
    auto gamma = gamma_II(data, grid, &k1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        gamma[i] *= 0.5;
        k1[i] *= 0.5;
    }
    return exp_bound_curve(grid, gamma, k1, std::sqrt(data.rho0));
}

}  // namespace

GronwallData make_gronwall_I(double T0, double T, double rho0, ScalarFn eps, ScalarFn K1,
                             ScalarFn K2, Kernel2Fn K3_ts) {
    GronwallData d;
    d.T0 = T0;
    d.T = T;
    d.rho0 = rho0;
    d.eps = eps ? std::move(eps) : zero_fn();
    d.K1 = K1 ? std::move(K1) : zero_fn();
    d.K2 = K2 ? std::move(K2) : zero_fn();
    d.K3_ts = std::move(K3_ts);
    d.variant = GronwallVariant::I;
    if (rho0 < 0.0) throw NegativeCoefficient("rho0 must be nonnegative");
    return d;
}

GronwallData make_gronwall_II(double T0, double T, double rho0, ScalarFn eps, ScalarFn K1,
                              ScalarFn K2, ScalarFn K3, ScalarFn K4, bool sqrt_form) {
    GronwallData d;
    d.T0 = T0;
    d.T = T;
    d.rho0 = rho0;
    d.eps = eps ? std::move(eps) : zero_fn();
    d.K1 = K1 ? std::move(K1) : zero_fn();
    d.K2 = K2 ? std::move(K2) : zero_fn();
    d.K3 = K3 ? std::move(K3) : zero_fn();
    d.K4 = K4 ? std::move(K4) : zero_fn();
    d.variant = sqrt_form ? GronwallVariant::IIb : GronwallVariant::IIa;
    if (rho0 < 0.0) throw NegativeCoefficient("rho0 must be nonnegative");
    return d;
}

BoundCurve gronwall_I(const GronwallData& data, const Grid& grid) {
    if (data.variant != GronwallVariant::I)
        throw std::invalid_argument("gronwall_I: data tagged for another variant");
    return assemble(data, grid, GronwallVariant::I, &curve_I);
}

BoundCurve gronwall_II(const GronwallData& data, const Grid& grid) {
    if (data.variant != GronwallVariant::IIa)
        throw std::invalid_argument("gronwall_II: data tagged for another variant");
    return assemble(data, grid, GronwallVariant::IIa, &curve_IIa);
}

BoundCurve gronwall_II_sqrt(const GronwallData& data, const Grid& grid) {
    if (data.variant != GronwallVariant::IIb)
        throw std::invalid_argument("gronwall_II_sqrt: data tagged for another variant");
    return assemble(data, grid, GronwallVariant::IIb, &curve_IIb);
}

namespace {

// Equality-ODE integrator: RK4 on the 10x-refined grid, with the Volterra
// memory term evaluated by trapezoid over the fine history plus a linear
// closing segment up to the stage time.
std::vector<double> integrate_equality_ode(const GronwallData& data, const Grid& fine) {
    const std::size_t n = fine.size();
    std::vector<double> rho(n);
    rho[0] = data.rho0;

    const bool variant_I = data.variant == GronwallVariant::I;

    // variant II memory prefix: integral of K4(s) sqrt(rho(s)) up to s_k
    double w_prefix = 0.0;
    auto sqrt_pos = [](double v) { return std::sqrt(std::max(v, 0.0)); };

    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double t = fine[k];
        const double h = fine[k + 1] - t;

        // memory(tau, rho_stage): integral term of the hypothesis at stage time tau
        auto memory = [&](double tau, double rho_stage) -> double {
            if (variant_I) {
                if (!data.K3_ts) return 0.0;
                double acc = 0.0;
                double prev = data.K3_ts(tau, fine[0]) * rho[0];
                for (std::size_t j = 1; j <= k; ++j) {
                    const double cur = data.K3_ts(tau, fine[j]) * rho[j];
                    acc += 0.5 * (fine[j] - fine[j - 1]) * (prev + cur);
                    prev = cur;
                }
                acc += 0.5 * (tau - fine[k]) * (prev + data.K3_ts(tau, tau) * rho_stage);
                return acc;
            }
            const double closing = 0.5 * (tau - fine[k]) *
                                   (data.K4(fine[k]) * sqrt_pos(rho[k]) +
                                    data.K4(tau) * sqrt_pos(rho_stage));
            return w_prefix + closing;
        };

        auto rhs = [&](double tau, double value) -> double {
            if (variant_I)
                return data.eps(tau) + data.K1(tau) * value + data.K2(tau) * memory(tau, value);
            const double root = sqrt_pos(value);
            return data.eps(tau) + data.K1(tau) * root + data.K2(tau) * value +
                   data.K3(tau) * root * memory(tau, value);
        };

        const double y = rho[k];
        const double k1 = rhs(t, y);
        const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = rhs(t + h, y + h * k3);
        rho[k + 1] = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!variant_I)
            w_prefix += 0.5 * h * (data.K4(fine[k]) * sqrt_pos(rho[k]) +
                                   data.K4(fine[k + 1]) * sqrt_pos(rho[k + 1]));
    }
    return rho;
}

}  // namespace

DominanceReport verify_dominance(const BoundCurve& bound, const GronwallData& data,
                                 const Grid& grid) {
    validate_grid(grid);
    if (grid.size() != bound.grid.size())
        throw GridMismatch("verify_dominance: bound and grid sizes differ");

    const int factor = 10;
    const Grid fine = refine_grid(grid, factor);
    const auto rho_fine = integrate_equality_ode(data, fine);

    DominanceReport report;
    report.rho_numeric.resize(grid.size());
    double margin = std::numeric_limits<double>::infinity();
    double excess = -margin;
    const bool sqrt_form = data.variant == GronwallVariant::IIb;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double value = rho_fine[i * static_cast<std::size_t>(factor)];
        if (sqrt_form) value = std::sqrt(std::max(value, 0.0));
        report.rho_numeric[i] = value;
        margin = std::min(margin, bound.values[i] - value);
        excess = std::max(excess, value - bound.values[i]);
    }
    report.margin = margin;
    report.max_excess = excess;
    return report;
}

std::vector<GronwallCase> builtin_gronwall_cases() {
    std::vector<GronwallCase> cases;
    cases.push_back({"I-linear",
                     make_gronwall_I(0.0, 1.0, 1.0, nullptr, const_fn(1.0), nullptr, nullptr)});
    cases.push_back({"I-memory",
                     make_gronwall_I(0.0, 1.0, 1.0, nullptr, nullptr, const_fn(1.0),
                                     [](double, double) { return 1.0; })});
    cases.push_back({"I-mixed",
                     make_gronwall_I(0.0, 1.0, 1.0, [](double t) { return t; },
                                     [](double t) { return t; }, const_fn(1.0),
                                     [](double, double s) { return s; })});
    cases.push_back({"IIa-sqrt-drive",
                     make_gronwall_II(0.0, 1.0, 0.25, nullptr, const_fn(1.0), nullptr, nullptr,
                                      nullptr)});
    cases.push_back({"IIa-memory",
                     make_gronwall_II(0.0, 1.0, 1.0, nullptr, nullptr, nullptr, const_fn(1.0),
                                      const_fn(1.0))});
    cases.push_back({"IIb-tight",
                     make_gronwall_II(0.0, 1.0, 0.25, nullptr, const_fn(1.0), nullptr, nullptr,
                                      nullptr, true)});
    return cases;
}

}  // namespace vsp
