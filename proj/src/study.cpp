#include "vsp/study.hpp"

#include <cmath>

namespace vsp {

ConvergenceStudy convergence_study(const ProblemSpec& spec, const SolverConfig& base,
                                   const std::vector<int>& grid_sizes) {
    if (grid_sizes.size() < 3)
        throw std::invalid_argument("convergence_study: need at least 3 grid sizes");
    for (std::size_t i = 0; i < grid_sizes.size(); ++i) {
        if (grid_sizes[i] < 2) throw std::invalid_argument("convergence_study: sizes must be >= 2");
        if (i > 0 && grid_sizes[i] <= grid_sizes[i - 1])
            throw std::invalid_argument("convergence_study: sizes must be strictly increasing");
    }

    const int n_ref = grid_sizes.back();
    const Grid ref_coarse = uniform_grid(spec.T0, spec.T, n_ref);
    const Trajectory reference = reference_solve(spec, ref_coarse, 8);

    ConvergenceStudy study;
    for (int n : grid_sizes) {
        if (n_ref % n != 0)
            throw std::invalid_argument("convergence_study: every size must divide the largest (" +
                                        std::to_string(n) + " does not divide " +
                                        std::to_string(n_ref) + ")");
        SolverConfig config = base;
        config.n = n;
        config.explicit_grid.clear();
        const Trajectory traj = catching_up(spec, config);
        const std::size_t stride = static_cast<std::size_t>(n_ref / n);
        double err = 0.0;
        for (std::size_t k = 0; k < traj.states.size(); ++k)
            err = std::max(err, (traj.states[k] - reference.states[k * stride]).norm());
        StudyRow row;
        row.h = (spec.T - spec.T0) / n;
        row.error = err;
        row.exact = err <= 1e-14;
        row.order = std::numeric_limits<double>::quiet_NaN();
        study.rows.push_back(row);
    }

    for (std::size_t i = 1; i < study.rows.size(); ++i) {
        const auto& prev = study.rows[i - 1];
        auto& cur = study.rows[i];
        if (!prev.exact && !cur.exact)
            cur.order = std::log2(prev.error / cur.error) / std::log2(prev.h / cur.h);
    }

    // least-squares slope of log(error) against log(h)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& row : study.rows) {
        if (row.exact) continue;
        const double lx = std::log(row.h), ly = std::log(row.error);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    study.exact = count == 0;
    study.fitted_order =
        study.exact ? std::numeric_limits<double>::quiet_NaN()
                    : (count * sxy - sx * sy) / std::max(count * sxx - sx * sx, 1e-300);
    return study;
}

}  // namespace vsp
