#pragma once

#include "vsp/types.hpp"

namespace vsp {

/// Absolutely continuous vector path  p(t) = base + slope*t + amplitude*sin(omega*t + phase).
/// Covers the constant / linear / sinusoidal kinds used by scenario files; the
/// closed-form derivative doubles as the declared rate bound.
struct Path {
    Vec base;
    Vec slope;
    Vec amplitude;
    double omega = 0.0;
    double phase = 0.0;

    Vec value(double t) const;
    Vec derivative(double t) const;
    double rate_bound(double t) const { return derivative(t).norm(); }

    int dim() const { return static_cast<int>(base.size()); }
    bool constant() const;
    double scalar(double t) const { return value(t)(0); }
    double scalar_derivative(double t) const { return derivative(t)(0); }

    Path scaled(double factor) const;
    Path shifted(const Path& other) const;  // componentwise sum; oscillators must match

    static Path constant_path(Vec v);
    static Path zero(int dim);
    static Path linear(Vec base, Vec slope);
    static Path sinusoidal(Vec base, Vec amplitude, double omega, double phase = 0.0);
};

}  // namespace vsp
