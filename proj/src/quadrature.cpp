#include "vsp/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace vsp {

Grid uniform_grid(double t0, double t1, int n_intervals) {
    if (n_intervals < 1 || !(t1 > t0))
        throw NonmonotoneGrid("uniform_grid: need n >= 1 and t1 > t0");
    Grid g(static_cast<std::size_t>(n_intervals) + 1);
    const double h = (t1 - t0) / n_intervals;
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = t0 + h * static_cast<double>(i);
    g.back() = t1;
    return g;
}

void validate_grid(const Grid& grid) {
    if (grid.size() < 2) throw NonmonotoneGrid("grid needs at least 2 nodes");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw NonmonotoneGrid("grid not strictly increasing at index " + std::to_string(i));
}

std::size_t node_index(const Grid& grid, double t) {
    const auto it = std::lower_bound(grid.begin(), grid.end(), t - 1e-12 * std::max(1.0, std::abs(t)));
    if (it != grid.end() && std::abs(*it - t) <= 1e-12 * std::max(1.0, std::abs(t)))
        return static_cast<std::size_t>(it - grid.begin());
    throw GridMismatch("t = " + std::to_string(t) + " is not a grid node");
}

Grid refine_grid(const Grid& grid, int factor) {
    validate_grid(grid);
    if (factor < 1) throw std::invalid_argument("refine_grid: factor >= 1");
    Grid fine;
    fine.reserve((grid.size() - 1) * static_cast<std::size_t>(factor) + 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = (grid[i + 1] - grid[i]) / factor;
        for (int j = 0; j < factor; ++j) fine.push_back(grid[i] + h * j);
    }
    fine.push_back(grid.back());
    // coarse nodes are copied verbatim, so restriction is exact
    for (std::size_t i = 0; i < grid.size(); ++i) fine[i * static_cast<std::size_t>(factor)] = grid[i];
    return fine;
}

double max_step(const Grid& grid) {
    double h = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) h = std::max(h, grid[i] - grid[i - 1]);
    return h;
}

std::vector<double> sample(const ScalarFn& f, const Grid& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    return v;
}

std::vector<double> trapezoid_prefix(const Grid& grid, std::span<const double> values) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
        out[i] = out[i - 1] + 0.5 * (grid[i] - grid[i - 1]) * (values[i - 1] + values[i]);
    return out;
}

double trapezoid(const Grid& grid, std::span<const double> values) {
    double acc = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        acc += 0.5 * (grid[i] - grid[i - 1]) * (values[i - 1] + values[i]);
    return acc;
}

std::vector<double> volterra_row_integrals(const Grid& grid, const Kernel2Fn& k,
                                           bool require_nonneg) {
    const std::size_t n = grid.size();
    std::vector<double> row(n), out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            row[j] = k(grid[i], grid[j]);
            if (require_nonneg && row[j] < 0.0)
                throw NegativeCoefficient("kernel coefficient negative at (t,s) = (" +
                                          std::to_string(grid[i]) + ", " + std::to_string(grid[j]) + ")");
        }
        double acc = 0.0;
        for (std::size_t j = 1; j <= i; ++j)
            acc += 0.5 * (grid[j] - grid[j - 1]) * (row[j - 1] + row[j]);
        out[i] = acc;
    }
    return out;
}

std::vector<double> exp_bound_curve(const Grid& grid, std::span<const double> gamma,
                                    std::span<const double> eps, double rho0) {
    const std::size_t n = grid.size();
    std::vector<double> out(n);
    double prefix = 0.0;  // integral of gamma up to t_i
    double tail = 0.0;    // trapezoid of eps(s) exp(P_i - P_s)
    out[0] = rho0;
    for (std::size_t i = 1; i < n; ++i) {
        const double h = grid[i] - grid[i - 1];
        const double d_prefix = 0.5 * h * (gamma[i - 1] + gamma[i]);
        const double scale = std::exp(d_prefix);
        tail = tail * scale + 0.5 * h * (eps[i - 1] * scale + eps[i]);
        prefix += d_prefix;
        out[i] = rho0 * std::exp(prefix) + tail;
    }
    return out;
}

double operator_norm(const Mat& A) {
    if (A.size() == 0) return 0.0;
    const Mat B = A.transpose() * A;
    const auto d = B.rows();
    Vec v = Vec::Ones(d) / std::sqrt(static_cast<double>(d));
    double lambda = 0.0;
    for (int iter = 0; iter < 50; ++iter) {
        Vec w = B * v;
        const double norm = w.norm();
        if (norm == 0.0) {
            // restart from a basis vector; all-zero image means A = 0 on this direction
            bool restarted = false;
            for (int j = 0; j < d; ++j) {
                Vec e = Vec::Zero(d);
                e(j) = 1.0;
                if ((B * e).norm() > 0.0) {
                    v = e;
                    restarted = true;
                    break;
                }
            }
            if (!restarted) return 0.0;
            continue;
        }
        v = w / norm;
        const double next = v.dot(B * v);
        if (std::abs(next - lambda) <= 1e-12 * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

namespace {
double radical_inverse(int base, int index) {
    double inv = 1.0 / base, result = 0.0, frac = inv;
    while (index > 0) {
        result += (index % base) * frac;
        index /= base;
        frac *= inv;
    }
    return result;
}
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
}  // namespace

std::vector<Vec> halton_ball_points(int dim, double radius, int count) {
    if (dim < 1 || dim > 16) throw std::invalid_argument("halton_ball_points: dim in [1,16]");
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count));
    const double box_scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int i = 0; i < count; ++i) {
        Vec p(dim);
        for (int j = 0; j < dim; ++j)
            p(j) = 2.0 * radical_inverse(kPrimes[j], i + 1) - 1.0;  // cube [-1,1]^d
        if (i % 2 == 0) {
            p *= radius * box_scale;  // interior point
        } else {
            const double norm = p.norm();
            p = (norm > 0.0) ? Vec(p * (radius / norm)) : Vec(Vec::Zero(dim));
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

}  // namespace vsp
