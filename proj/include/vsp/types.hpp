#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace vsp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Time grid: strictly increasing nodes, front() = T0, back() = T.
using Grid = std::vector<double>;

// ---------------------------------------------------------------------------
// Error taxonomy. Each operation contract names the errors it may raise;
// they all derive from std::runtime_error so callers can catch broadly.
// ---------------------------------------------------------------------------

struct ProjectionAmbiguous : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotOnSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedKind : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NegativeCoefficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonmonotoneGrid : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EpsilonNotZero : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleStart : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VariantMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ModulusViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Grid helpers
// ---------------------------------------------------------------------------

/// Uniform grid with n intervals (n+1 nodes) over [t0, t1].
Grid uniform_grid(double t0, double t1, int n_intervals);

/// Throws NonmonotoneGrid unless the grid has >= 2 strictly increasing nodes.
void validate_grid(const Grid& grid);

/// Index of t in the grid (tolerance 1e-12 relative); throws GridMismatch.
std::size_t node_index(const Grid& grid, double t);

/// Each interval split into `factor` subintervals; coarse nodes are kept exactly.
Grid refine_grid(const Grid& grid, int factor);

/// Largest interval length.
double max_step(const Grid& grid);

}  // namespace vsp
