#pragma once

#include "vsp/paths.hpp"
#include "vsp/quadrature.hpp"
#include "vsp/sets.hpp"
#include "vsp/types.hpp"

#include <functional>
#include <optional>

namespace vsp {

using VectorField2 = std::function<Vec(double, const Vec&)>;          // f(t, x)
using VectorField3 = std::function<Vec(double, double, const Vec&)>;  // g(t, s, x)
using ModulusFn = std::function<double(double, double)>;              // (r, t) -> modulus

// ---------------------------------------------------------------------------
// Forcing f with its growth and local-Lipschitz moduli:
//   |f(t,x)| <= beta(t) (1 + |x|),   |f(t,x) - f(t,y)| <= kappa(r,t) |x-y| on rB.
// ---------------------------------------------------------------------------

struct AffineForcingData {
    Mat A;
    Path b;
};

struct Forcing {
    VectorField2 eval;
    ScalarFn beta;
    ModulusFn kappa;
    std::optional<AffineForcingData> affine;  // retained for exact sup computations
};

/// f(t,x) = A x + b(t); beta and kappa derived from the operator norm of A.
Forcing affine_forcing(Mat A, Path b);
Forcing zero_forcing(int dim);

// ---------------------------------------------------------------------------
// Volterra kernel g on D = {s <= t} with
//   |g(t,s,x)| <= sigma(t,s) (1 + |x|),  |g(t,s,x) - g(t,s,y)| <= mu(r,t) |x-y|.
// ---------------------------------------------------------------------------

/// Scalar coefficient k(t,s) of the separable built-in kernels. The sup of |k|
/// over s in [T0,t] is closed-form for every kind (affine in s is monotone,
/// the exponential kind needs lambda >= 0).
struct KernelCoef {
    enum class Kind { Constant, Affine, ExpDecay };
    Kind kind = Kind::Constant;
    double k0 = 0.0;
    double kt = 0.0;      // Affine: k0 + kt*t + ks*s
    double ks = 0.0;
    double lambda = 0.0;  // ExpDecay: k0 * exp(-lambda (t-s)), lambda >= 0

    double eval(double t, double s) const;
    double sup_abs_over_s(double T0, double t) const;

    static KernelCoef constant(double value);
    static KernelCoef affine(double k0, double kt, double ks);
    static KernelCoef exp_decay(double k0, double lambda);
};

struct SeparableKernelData {
    KernelCoef coef;
    Mat B;
    Vec c;
};

struct VolterraKernel {
    VectorField3 eval;
    Kernel2Fn sigma;
    ModulusFn mu;
    std::optional<SeparableKernelData> separable;
};

/// g(t,s,x) = k(t,s) (B x + c); sigma and mu derived from |k| and the operator
/// norm of B. T0 anchors the sup over s in [T0, t] for the mu modulus.
VolterraKernel separable_kernel(KernelCoef coef, Mat B, Vec c, double T0 = 0.0);
VolterraKernel zero_kernel(int dim);

/// Identically-zero separable kernels are detectable, which lets the solvers
/// skip the O(n^2) memory accumulation.
bool is_zero_kernel(const VolterraKernel& kernel);

// ---------------------------------------------------------------------------
// Problem data and trajectories
// ---------------------------------------------------------------------------

struct ProblemSpec {
    double T0 = 0.0, T = 1.0;
    MovingSet set;
    Path z;           // perturbation path; the constraint set is C(t) + z(t)
    ScalarFn z_rate;  // declared R(t) >= |z'(t)|
    Forcing forcing;
    VolterraKernel kernel;
    Vec x0;

    int dim() const { return static_cast<int>(x0.size()); }
};

enum class Provenance { CatchingUp, FixedPoint, Reference };

struct Trajectory {
    Grid grid;
    std::vector<Vec> states;
    std::vector<Vec> derivs;  // forward differences; the last node repeats the previous one
    Provenance provenance = Provenance::CatchingUp;
};

/// Recomputes forward differences from grid and states.
void fill_derivatives(Trajectory& traj);

/// Trapezoid quadrature of s -> g(t, s, x(s)) over the grid nodes in [T0, t].
/// `states` must cover at least the nodes up to t; throws GridMismatch when t
/// is not a node. Exact for integrands affine in s on the grid.
Vec accumulate_volterra(const VolterraKernel& kernel, const Grid& grid,
                        const std::vector<Vec>& states, double t);

/// gamma(t) = 2 beta(t) + 2 int_{T0}^t sigma(t,s) ds, per grid node.
std::vector<double> gamma_curve(const ProblemSpec& spec, const Grid& grid);

struct PhiReparam {
    std::vector<double> phi;  // phi(t_i) = max{1, kappa_{rT}(t_i), mu_{rT}(t_i), beta(t_i), int sigma}
    Grid transformed;         // Phi(t_i) = int_{T0}^{t_i} phi, a strictly increasing grid on [0, Phi(T)]
};

/// Time reparametrization: phi >= 1 makes Phi strictly increasing, so the node
/// map t_i <-> Phi(t_i) is invertible by index.
PhiReparam phi_reparametrization(const ProblemSpec& spec, double r_T, const Grid& grid);

/// Samples the declared growth/Lipschitz inequalities for f and g; any sampled
/// violation throws ModulusViolation citing the offending (t, x).
void validate_moduli(const ProblemSpec& spec, int time_samples = 16, int space_samples = 32);

}  // namespace vsp
