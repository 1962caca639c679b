#pragma once

#include "vsp/solver.hpp"

namespace vsp {

struct StudyRow {
    double h = 0.0;
    double error = 0.0;
    double order = 0.0;  // NaN on the first row and for exact runs
    bool exact = false;
};

struct ConvergenceStudy {
    std::vector<StudyRow> rows;
    double fitted_order = 0.0;  // least-squares slope of log(error) vs log(h)
    bool exact = false;         // all errors at roundoff level
};

/// Runs catching-up at each grid size and measures the sup-distance to a
/// reference computed at the largest size refined 8x. Sizes must be strictly
/// increasing and divide the reference grid so nodes align exactly.
ConvergenceStudy convergence_study(const ProblemSpec& spec, const SolverConfig& base,
                                   const std::vector<int>& grid_sizes);

}  // namespace vsp
