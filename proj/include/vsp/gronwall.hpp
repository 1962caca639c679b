#pragma once

#include "vsp/quadrature.hpp"
#include "vsp/types.hpp"

#include <string>

namespace vsp {

enum class GronwallVariant { I, IIa, IIb };

/// Hypothesis data for the integral Gronwall inequalities.
///
/// Variant I bounds rho with  rho' <= eps + K1 rho + K2 int K3(t,s) rho(s) ds,
/// variant II with            rho' <= eps + K1 sqrt(rho) + K2 rho + K3 sqrt(rho) int K4 sqrt(rho) ds.
/// IIb is the sqrt-form conclusion of variant II and requires eps == 0.
struct GronwallData {
    double T0 = 0.0, T = 1.0;
    double rho0 = 0.0;
    ScalarFn eps, K1, K2;
    Kernel2Fn K3_ts;  // variant I only
    ScalarFn K3, K4;  // variant II only
    GronwallVariant variant = GronwallVariant::I;
};

GronwallData make_gronwall_I(double T0, double T, double rho0, ScalarFn eps, ScalarFn K1,
                             ScalarFn K2, Kernel2Fn K3_ts);
GronwallData make_gronwall_II(double T0, double T, double rho0, ScalarFn eps, ScalarFn K1,
                              ScalarFn K2, ScalarFn K3, ScalarFn K4, bool sqrt_form = false);

struct BoundCurve {
    Grid grid;
    std::vector<double> values;
    GronwallVariant variant = GronwallVariant::I;
    double quadrature_step = 0.0;
    double quadrature_error_estimate = 0.0;  // Richardson estimate at the final node

    double final_value() const { return values.back(); }
};

/// Bound curve of the first inequality:
///   rho0 exp(int gamma) + int eps(s) exp(int_s^t gamma) ds,
///   gamma(t) = K1(t) + K2(t) int_{T0}^t K3(t,s) ds.
BoundCurve gronwall_I(const GronwallData& data, const Grid& grid);

/// Bound curve of the second inequality, part (a):
///   same closed form with gamma + K1 in the exponent and eps + K1 in the integrand,
///   gamma(t) = K2(t) + K3(t) int_{T0}^t K4(s) ds.
BoundCurve gronwall_II(const GronwallData& data, const Grid& grid);

/// Part (b): bound on sqrt(rho), requires eps == 0 on the grid:
///   sqrt(rho0) exp(int gamma/2) + 1/2 int K1(s) exp(int_s^t gamma/2) ds.
BoundCurve gronwall_II_sqrt(const GronwallData& data, const Grid& grid);

struct DominanceReport {
    double margin = 0.0;      // min over grid of (bound - rho_numeric); dominance means >= -tol
    double max_excess = 0.0;  // max of (rho_numeric - bound)
    std::vector<double> rho_numeric;
};

/// Integrates the equality version of the hypothesis ODE with RK4 on a grid
/// refined 10x (memory terms by trapezoid over the fine history) and compares
/// against the bound curve. For IIb the comparison is sqrt(rho) vs the bound.
DominanceReport verify_dominance(const BoundCurve& bound, const GronwallData& data,
                                 const Grid& grid);

struct GronwallCase {
    std::string name;
    GronwallData data;
};

/// The six stock cases used by the self-test and the acceptance suite
/// (two per variant, including the tight equality ones).
std::vector<GronwallCase> builtin_gronwall_cases();

}  // namespace vsp
