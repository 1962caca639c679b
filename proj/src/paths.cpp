#include "vsp/paths.hpp"

#include <cmath>

namespace vsp {

Vec Path::value(double t) const {
    Vec v = base + slope * t;
    if (amplitude.size() > 0 && amplitude.norm() > 0.0) v += amplitude * std::sin(omega * t + phase);
    return v;
}

Vec Path::derivative(double t) const {
    Vec v = slope;
    if (amplitude.size() > 0 && amplitude.norm() > 0.0) v += amplitude * (omega * std::cos(omega * t + phase));
    return v;
}

bool Path::constant() const {
    const bool no_osc = amplitude.size() == 0 || amplitude.norm() == 0.0 || omega == 0.0;
    return slope.norm() == 0.0 && no_osc;
}

Path Path::scaled(double factor) const {
    Path p = *this;
    p.base *= factor;
    p.slope *= factor;
    p.amplitude *= factor;
    return p;
}

Path Path::shifted(const Path& other) const {
    if (other.dim() != dim()) throw std::invalid_argument("Path::shifted: dimension mismatch");
    const bool osc_a = amplitude.norm() > 0.0, osc_b = other.amplitude.norm() > 0.0;
    if (osc_a && osc_b && (omega != other.omega || phase != other.phase))
        throw std::invalid_argument("Path::shifted: incompatible oscillators");
    Path p = *this;
    p.base += other.base;
    p.slope += other.slope;
    p.amplitude += other.amplitude;
    if (!osc_a && osc_b) {
        p.omega = other.omega;
        p.phase = other.phase;
    }
    return p;
}

Path Path::constant_path(Vec v) {
    const int d = static_cast<int>(v.size());
    return Path{std::move(v), Vec::Zero(d), Vec::Zero(d), 0.0, 0.0};
}

Path Path::zero(int dim) { return constant_path(Vec::Zero(dim)); }

Path Path::linear(Vec base, Vec slope) {
    const int d = static_cast<int>(base.size());
    return Path{std::move(base), std::move(slope), Vec::Zero(d), 0.0, 0.0};
}

Path Path::sinusoidal(Vec base, Vec amplitude, double omega, double phase) {
    const int d = static_cast<int>(base.size());
    return Path{std::move(base), Vec::Zero(d), std::move(amplitude), omega, phase};
}

}  // namespace vsp
