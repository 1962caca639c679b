#pragma once

#include "vsp/paths.hpp"
#include "vsp/quadrature.hpp"
#include "vsp/types.hpp"

#include <limits>
#include <memory>
#include <variant>

namespace vsp {

// Supported slice families. All have closed-form metric projections, which is
// what keeps the catching-up step exact; the sphere is the one prox-regular
// kind (prox constant = radius), everything else is convex (prox = +inf).

struct WholeSpace {
    int dim = 1;
};
/// { x : <normal, x> >= offset(t) }, normal stored unit-length, offset a scalar path.
struct HalfSpace {
    Vec normal;
    Path offset;
};
struct Box {
    Vec lo, hi;
};
/// { x : |x - center(t)| <= radius }
struct BallSet {
    Path center;
    double radius = 1.0;
};
/// { x : |x - center(t)| == radius }, rho-uniformly prox-regular with rho = radius.
struct SphereSet {
    Path center;
    double radius = 1.0;
};
struct MovingSet;
/// base convex set translated along shift(t).
struct TranslatedConvex {
    std::shared_ptr<const MovingSet> base;
    Path shift;
};

inline constexpr double kProxInfinite = std::numeric_limits<double>::infinity();

struct MovingSet {
    std::variant<WholeSpace, HalfSpace, Box, BallSet, SphereSet, TranslatedConvex> shape;
    double prox_constant = kProxInfinite;
    ScalarFn vdot_abs;  // |v'(t)| of the declared motion modulus

    int dim() const;
    bool convex() const { return std::isinf(prox_constant); }
    bool time_independent() const;
    /// |v(t) - v(s)| upper estimate, integral of |v'| by fine trapezoid.
    double motion_increment(double s, double t) const;
};

MovingSet make_whole_space(int dim);
MovingSet make_half_space(Vec normal, Path offset);
MovingSet make_box(Vec lo, Vec hi);
MovingSet make_ball(Path center, double radius);
MovingSet make_sphere(Path center, double radius);
MovingSet make_translated(MovingSet base, Path shift);

/// Metric projection onto C(t). Throws ProjectionAmbiguous when the kind is
/// prox-regular and dist(x, C(t)) >= rho*(1 - 1e-9), where uniqueness fails.
Vec project(const MovingSet& set, double t, const Vec& x);

double distance(const MovingSet& set, double t, const Vec& x);

/// Metric projection of h onto the tangent cone T_{C(t)}(x), convex kinds only.
/// Interior points return h; the result satisfies the Moreau decomposition
/// h = proj_T(h) + proj_N(h) with <proj_T, proj_N> = 0.
Vec tangent_projection(const MovingSet& set, double t, const Vec& x, const Vec& h,
                       double tol = 1e-9);

struct HypomonotonicityReport {
    double worst = 0.0;        // min over pairs of <v1-v2, x1-x2> + (1/rho)|x1-x2|^2
    double worst_slack = 0.0;  // same with the 1/rho term inflated by 1e-9 (roundoff guard)
    double inv_rho = 0.0;
    int pair_count = 0;
};

/// Samples unit proximal normals (manufactured by projecting outward-perturbed
/// boundary points) and evaluates the pairwise hypomonotonicity expression.
HypomonotonicityReport check_hypomonotone(const MovingSet& set, double t, int sample_count,
                                          unsigned rng_seed);

/// Sampled estimate of sup over x in C(t) of dist(x, C(s)).
double motion_excess(const MovingSet& set, double s, double t, int sample_count,
                     unsigned rng_seed = 2026);

}  // namespace vsp
