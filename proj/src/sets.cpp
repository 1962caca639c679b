#include "vsp/sets.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace vsp {

namespace {

constexpr double kAmbiguityFactor = 1.0 - 1e-9;

ScalarFn zero_fn() {
    return [](double) { return 0.0; };
}

void check_box(const Box& b) {
    for (Eigen::Index i = 0; i < b.lo.size(); ++i)
        if (b.lo(i) > b.hi(i))
            throw InfeasibleSet("box slice empty: lo > hi in coordinate " + std::to_string(i));
}

}  // namespace

int MovingSet::dim() const {
    return std::visit(
        [](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WholeSpace>) return s.dim;
            else if constexpr (std::is_same_v<T, HalfSpace>) return static_cast<int>(s.normal.size());
            else if constexpr (std::is_same_v<T, Box>) return static_cast<int>(s.lo.size());
            else if constexpr (std::is_same_v<T, BallSet> || std::is_same_v<T, SphereSet>)
                return s.center.dim();
            else return s.base->dim();
        },
        shape);
}

bool MovingSet::time_independent() const {
    return std::visit(
        [](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WholeSpace> || std::is_same_v<T, Box>) return true;
            else if constexpr (std::is_same_v<T, HalfSpace>) return s.offset.constant();
            else if constexpr (std::is_same_v<T, BallSet> || std::is_same_v<T, SphereSet>)
                return s.center.constant();
            else return s.shift.constant() && s.base->time_independent();
        },
        shape);
}

double MovingSet::motion_increment(double s, double t) const {
    if (s == t) return 0.0;
    const double a = std::min(s, t), b = std::max(s, t);
    const int n = 256;
    const double h = (b - a) / n;
    double acc = 0.0;
    double prev = vdot_abs(a);
    for (int i = 1; i <= n; ++i) {
        const double cur = vdot_abs(a + h * i);
        acc += 0.5 * h * (prev + cur);
        prev = cur;
    }
    return acc;
}

MovingSet make_whole_space(int dim) {
    return MovingSet{WholeSpace{dim}, kProxInfinite, zero_fn()};
}

MovingSet make_half_space(Vec normal, Path offset) {
    const double norm = normal.norm();
    if (norm == 0.0) throw std::invalid_argument("half-space normal must be nonzero");
    if (offset.dim() != 1) throw std::invalid_argument("half-space offset must be a scalar path");
    // normalize so the offset path is the signed boundary position
    Path scaled_offset = offset.scaled(1.0 / norm);
    MovingSet set{HalfSpace{normal / norm, scaled_offset}, kProxInfinite, nullptr};
    set.vdot_abs = [p = scaled_offset](double t) { return std::abs(p.scalar_derivative(t)); };
    return set;
}

MovingSet make_box(Vec lo, Vec hi) {
    Box b{std::move(lo), std::move(hi)};
    check_box(b);
    return MovingSet{std::move(b), kProxInfinite, zero_fn()};
}

MovingSet make_ball(Path center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("ball radius must be positive");
    MovingSet set{BallSet{center, radius}, kProxInfinite, nullptr};
    set.vdot_abs = [c = center](double t) { return c.derivative(t).norm(); };
    return set;
}

MovingSet make_sphere(Path center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("sphere radius must be positive");
    MovingSet set{SphereSet{center, radius}, radius, nullptr};
    set.vdot_abs = [c = center](double t) { return c.derivative(t).norm(); };
    return set;
}

MovingSet make_translated(MovingSet base, Path shift) {
    if (!base.convex()) throw UnsupportedKind("translated-convex requires a convex base set");
    if (!base.time_independent())
        throw UnsupportedKind("translated-convex requires a static base set");
    if (shift.dim() != base.dim()) throw std::invalid_argument("translation dimension mismatch");
    auto base_ptr = std::make_shared<const MovingSet>(std::move(base));
    MovingSet set{TranslatedConvex{base_ptr, shift}, kProxInfinite, nullptr};
    set.vdot_abs = [p = shift](double t) { return p.derivative(t).norm(); };
    return set;
}

Vec project(const MovingSet& set, double t, const Vec& x) {
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WholeSpace>) {
                return x;
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                const double gap = s.normal.dot(x) - s.offset.scalar(t);
                if (gap >= 0.0) return x;
                return x - gap * s.normal;
            } else if constexpr (std::is_same_v<T, Box>) {
                check_box(s);
                return x.cwiseMax(s.lo).cwiseMin(s.hi);
            } else if constexpr (std::is_same_v<T, BallSet>) {
                const Vec c = s.center.value(t);
                const Vec d = x - c;
                const double norm = d.norm();
                if (norm <= s.radius) return x;
                return c + d * (s.radius / norm);
            } else if constexpr (std::is_same_v<T, SphereSet>) {
                const Vec c = s.center.value(t);
                const Vec d = x - c;
                const double norm = d.norm();
                // uniqueness degrades toward the center, where dist(x, C(t))
                // reaches rho; radial projection is single-valued anywhere else
                if (s.radius - norm >= s.radius * kAmbiguityFactor)
                    throw ProjectionAmbiguous(
                        "sphere projection not single-valued near the center: dist(x, C(t)) = " +
                        std::to_string(s.radius - norm) + " within 1e-9 of rho = " +
                        std::to_string(s.radius));
                return c + d * (s.radius / norm);
            } else {  // TranslatedConvex
                const Vec u = s.shift.value(t);
                return u + project(*s.base, t, Vec(x - u));
            }
        },
        set.shape);
}

double distance(const MovingSet& set, double t, const Vec& x) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SphereSet>) {
                return std::abs((x - s.center.value(t)).norm() - s.radius);
            } else if constexpr (std::is_same_v<T, BallSet>) {
                return std::max(0.0, (x - s.center.value(t)).norm() - s.radius);
            } else {
                return (x - project(set, t, x)).norm();
            }
        },
        set.shape);
}

namespace {

// Tangent-cone projection for the convex kinds. x is assumed on the set.
Vec tangent_project_impl(const MovingSet& set, double t, const Vec& x, const Vec& h, double tol) {
    return std::visit(
        [&](const auto& s) -> Vec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WholeSpace>) {
                return h;
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                const double gap = s.normal.dot(x) - s.offset.scalar(t);
                if (gap > tol) return h;  // interior
                const double hn = s.normal.dot(h);
                if (hn >= 0.0) return h;
                return h - hn * s.normal;
            } else if constexpr (std::is_same_v<T, Box>) {
                Vec w = h;
                for (Eigen::Index i = 0; i < w.size(); ++i) {
                    const bool at_lo = x(i) - s.lo(i) <= tol;
                    const bool at_hi = s.hi(i) - x(i) <= tol;
                    if (at_lo && at_hi) w(i) = 0.0;
                    else if (at_lo) w(i) = std::max(w(i), 0.0);
                    else if (at_hi) w(i) = std::min(w(i), 0.0);
                }
                return w;
            } else if constexpr (std::is_same_v<T, BallSet>) {
                const Vec c = s.center.value(t);
                const Vec d = x - c;
                if (s.radius - d.norm() > tol) return h;  // interior
                const Vec n = d / d.norm();
                const double hn = n.dot(h);
                if (hn <= 0.0) return h;
                return h - hn * n;
            } else if constexpr (std::is_same_v<T, TranslatedConvex>) {
                const Vec u = s.shift.value(t);
                return tangent_project_impl(*s.base, t, Vec(x - u), h, tol);
            } else {
                throw UnsupportedKind("tangent projection is only defined for convex kinds");
            }
        },
        set.shape);
}

}  // namespace

Vec tangent_projection(const MovingSet& set, double t, const Vec& x, const Vec& h, double tol) {
    if (!set.convex()) throw UnsupportedKind("tangent projection: prox-regular kind");
    const double d = distance(set, t, x);
    if (d > tol)
        throw NotOnSet("tangent projection: dist(x, C(t)) = " + std::to_string(d) +
                       " exceeds tolerance " + std::to_string(tol));
    return tangent_project_impl(set, t, x, h, tol);
}

namespace {

// Sampling window per kind: a center point of/near the slice and a radius wide
// enough to reach the boundary features that drive the diagnostics.
struct Window {
    Vec center;
    double radius;
};

Window sample_window(const MovingSet& set, double t) {
    return std::visit(
        [&](const auto& s) -> Window {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, WholeSpace>) {
                return {Vec::Zero(s.dim), 1.0};
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
                const Vec boundary = s.offset.scalar(t) * s.normal;
                return {boundary, std::max(1.0, 0.5 * boundary.norm())};
            } else if constexpr (std::is_same_v<T, Box>) {
                return {0.5 * (s.lo + s.hi), std::max(1e-6, 0.75 * (s.hi - s.lo).norm())};
            } else if constexpr (std::is_same_v<T, BallSet> || std::is_same_v<T, SphereSet>) {
                return {s.center.value(t), 1.5 * s.radius};
            } else {
                Window w = sample_window(*s.base, t);
                w.center += s.shift.value(t);
                return w;
            }
        },
        set.shape);
}

double diameter_guess(const MovingSet& set, double t) {
    return 2.0 * sample_window(set, t).radius;
}

Vec random_direction(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 16; ++attempt) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
        const double norm = v.norm();
        if (norm > 1e-12) return v / norm;
    }
    Vec e = Vec::Zero(dim);
    e(0) = 1.0;
    return e;
}

Vec sample_on_set(const MovingSet& set, double t, std::mt19937_64& rng) {
    const Window w = sample_window(set, t);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec p(w.center.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = gauss(rng);
    p = w.center + w.radius * p;
    if (!set.convex()) {
        // stay inside the single-valued band of the sphere projection
        Vec dir = p - w.center;
        const double norm = dir.norm();
        dir = norm > 1e-12 ? Vec(dir / norm) : random_direction(rng, set.dim());
        p = w.center + dir * (0.75 * w.radius);
    }
    return project(set, t, p);
}

}  // namespace

HypomonotonicityReport check_hypomonotone(const MovingSet& set, double t, int sample_count,
                                          unsigned rng_seed) {
    if (sample_count < 2) throw std::invalid_argument("check_hypomonotone: sample_count >= 2");
    std::mt19937_64 rng(rng_seed);
    const int d = set.dim();
    const double eps = 1e-4 * std::max(diameter_guess(set, t), 1e-6);
    const double inv_rho = set.convex() ? 0.0 : 1.0 / set.prox_constant;

    std::vector<Vec> points, normals;
    points.reserve(static_cast<std::size_t>(sample_count));
    normals.reserve(static_cast<std::size_t>(sample_count));
    for (int i = 0; i < sample_count; ++i) {
        const Vec x = sample_on_set(set, t, rng);
        const Vec out = x + eps * random_direction(rng, d);
        const Vec back = project(set, t, out);
        const Vec diff = out - back;
        const double norm = diff.norm();
        // interior perturbation stays on the set: the zero normal is admissible
        points.push_back(back);
        normals.push_back(norm > 0.25 * eps ? Vec(diff / norm) : Vec(Vec::Zero(d)));
    }

    HypomonotonicityReport report;
    report.inv_rho = inv_rho;
    double worst = std::numeric_limits<double>::infinity();
    double worst_slack = worst;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const Vec dx = points[i] - points[j];
            const double inner = (normals[i] - normals[j]).dot(dx);
            const double sq = dx.squaredNorm();
            worst = std::min(worst, inner + inv_rho * sq);
            worst_slack = std::min(worst_slack, inner + inv_rho * (1.0 + 1e-9) * sq);
            ++report.pair_count;
        }
    }
    report.worst = report.pair_count > 0 ? worst : 0.0;
    report.worst_slack = report.pair_count > 0 ? worst_slack : 0.0;
    return report;
}

double motion_excess(const MovingSet& set, double s, double t, int sample_count,
                     unsigned rng_seed) {
    std::mt19937_64 rng(rng_seed);
    double excess = 0.0;
    for (int i = 0; i < sample_count; ++i) {
        const Vec x = sample_on_set(set, t, rng);
        excess = std::max(excess, distance(set, s, x));
    }
    return excess;
}

}  // namespace vsp
