#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vsp/scenario.hpp"
#include "vsp/solver.hpp"

#include <cmath>

using namespace vsp;

namespace {

Vec vec1(double a) {
    Vec v(1);
    v << a;
    return v;
}
Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
    double sup = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        sup = std::max(sup, (a.states[k] - b.states[k]).norm());
    return sup;
}

double feasibility_gap(const Trajectory& traj, const ProblemSpec& spec) {
    double worst = 0.0;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const Vec inner = traj.states[k] - spec.z.value(traj.grid[k]);
        worst = std::max(worst, distance(spec.set, traj.grid[k], inner));
    }
    return worst;
}

}  // namespace

TEST_CASE("normal cone absorbs inward forcing") {
    const auto sc = builtin_scenario("static-rest");
    SolverConfig config = sc.config;
    config.n = 50;
    const Trajectory traj = catching_up(sc.spec, config);
    for (const Vec& x : traj.states) CHECK(x.norm() == 0.0);
}

TEST_CASE("moving half-line is reproduced exactly at every node") {
    const auto sc = builtin_scenario("moving-halfline");
    for (int n : {2, 3, 7, 100, 400}) {
        SolverConfig config = sc.config;
        config.n = n;
        const Trajectory traj = catching_up(sc.spec, config);
        for (std::size_t k = 0; k < traj.states.size(); ++k)
            CHECK(std::abs(traj.states[k](0) - traj.grid[k]) <= 1e-12);
    }
}

TEST_CASE("unconstrained Euler on x' = x converges at first order") {
    const auto sc = builtin_scenario("linear-ode");
    double prev_err = 0.0;
    for (int n : {100, 200, 400}) {
        SolverConfig config = sc.config;
        config.n = n;
        const Trajectory traj = catching_up(sc.spec, config);
        const double err = std::abs(traj.states.back()(0) - 2.718281828459045);
        if (prev_err > 0.0) {
            const double ratio = prev_err / err;
            CHECK(ratio >= 1.8);
            CHECK(ratio <= 2.2);
        }
        prev_err = err;
    }
}

TEST_CASE("memory ramp x' = t reaches 1/2") {
    const auto sc = builtin_scenario("volterra-ramp");
    SolverConfig config = sc.config;
    config.n = 400;
    const Trajectory traj = catching_up(sc.spec, config);
    CHECK(std::abs(traj.states.back()(0) - 0.5) <= 1.0 / 400.0 * 2.0);
}

TEST_CASE("infeasible starting point is rejected") {
    auto sc = builtin_scenario("static-rest");
    sc.spec.x0 = vec1(-1.0);
    CHECK_THROWS_AS(catching_up(sc.spec, sc.config), InfeasibleStart);
}

TEST_CASE("inner sweeping with frozen forcing") {
    const Grid grid = uniform_grid(0.0, 1.0, 50);

    SUBCASE("no forcing on a static set: constant trajectory") {
        const auto box = make_box(Vec::Zero(2), vec2(1.0, 1.0));
        std::vector<Vec> h(grid.size(), Vec::Zero(2));
        const auto result =
            solve_inner_sweeping(box, Path::zero(2), nullptr, h, grid, vec2(0.25, 0.5));
        for (const Vec& x : result.traj.states) CHECK((x - vec2(0.25, 0.5)).norm() == 0.0);
        CHECK(result.lemma_margin <= 1e-12);
    }
    SUBCASE("pressed against a wall: |d - h| = |h| is the equality case") {
        const auto halfline = make_half_space(vec1(1.0), Path::zero(1));
        std::vector<Vec> h(grid.size(), vec1(-1.0));
        const auto result = solve_inner_sweeping(halfline, Path::zero(1), nullptr, h, grid, vec1(0.0));
        for (const Vec& x : result.traj.states) CHECK(x.norm() == 0.0);
        CHECK(result.lemma_margin == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("dragged by the moving set: |d| = |v'| is the equality case") {
        const auto halfline = make_half_space(vec1(1.0), Path::linear(Vec::Zero(1), vec1(1.0)));
        std::vector<Vec> h(grid.size(), Vec::Zero(1));
        const auto result = solve_inner_sweeping(halfline, Path::zero(1), nullptr, h, grid, vec1(0.0));
        CHECK(result.lemma_margin <= 1e-12);
        CHECK(result.traj.states.back()(0) == doctest::Approx(1.0));
    }
}

TEST_CASE("fixed point: stationary data converge in one iteration") {
    ProblemSpec spec;
    spec.T0 = 0.0;
    spec.T = 1.0;
    spec.set = make_box(Vec::Zero(2), vec2(1.0, 1.0));
    spec.z = Path::zero(2);
    spec.forcing = zero_forcing(2);
    spec.kernel = zero_kernel(2);
    spec.x0 = vec2(0.5, 0.25);
    SolverConfig config;
    config.n = 40;
    const auto result = fixed_point_solve(spec, config);
    CHECK(result.report.converged);
    CHECK(result.report.iterations == 1);
    CHECK(result.report.residual == 0.0);
    for (const Vec& x : result.traj.states) CHECK((x - spec.x0).norm() == 0.0);
}

TEST_CASE("fixed point cross-validates catching-up on every stock scenario") {
    for (const auto& sc : builtin_scenarios()) {
        CAPTURE(sc.name);
        SolverConfig config = sc.config;
        config.n = 200;
        const double h = (sc.spec.T - sc.spec.T0) / config.n;
        const Trajectory direct = catching_up(sc.spec, config);
        const auto fp = fixed_point_solve(sc.spec, config);
        CHECK(fp.report.converged);
        CHECK(fp.report.iterations <= config.max_iterations);
        CHECK(sup_distance(direct, fp.traj) <= config.tol_fp + 5.0 * h);
        CHECK(feasibility_gap(fp.traj, sc.spec) <= 1e-9);
        CHECK(feasibility_gap(direct, sc.spec) <= 1e-9);
    }
}

TEST_CASE("per-iteration deltas eventually contract") {
    const auto sc = builtin_scenario("linear-ode");
    SolverConfig config = sc.config;
    config.n = 100;
    config.tol_fp = 1e-12;
    const auto result = fixed_point_solve(sc.spec, config);
    const auto& d = result.report.deltas;
    REQUIRE(d.size() >= 5);
    for (std::size_t m = 0; m + 3 < d.size(); ++m) {
        if (d[m] == 0.0) break;
        CHECK(d[m + 3] < d[m]);
    }
}

TEST_CASE("memory activation leaves the boundary on schedule") {
    const auto sc = builtin_scenario("memory-activation");
    SolverConfig config = sc.config;
    config.n = 400;
    const double h = 2.0 / config.n;
    for (bool fixed_point : {false, true}) {
        const Trajectory traj = fixed_point
                                    ? fixed_point_solve(sc.spec, config).traj
                                    : catching_up(sc.spec, config);
        double leave_time = -1.0;
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            if (traj.states[k](0) > 1e-12) {
                leave_time = traj.grid[k];
                break;
            }
        }
        CHECK(leave_time >= 1.0 - 2.0 * h);
        CHECK(leave_time <= 1.0 + 2.0 * h);
        CHECK(std::abs(traj.states.back()(0) - 0.5) <= 10.0 * h);
    }
}

TEST_CASE("iteration cap raises NoConvergence with the report attached") {
    const auto sc = builtin_scenario("linear-ode");
    SolverConfig config = sc.config;
    config.n = 100;
    config.max_iterations = 1;
    try {
        fixed_point_solve(sc.spec, config);
        FAIL("expected NoConvergence");
    } catch (const NoConvergence& e) {
        CHECK(e.report.iterations == 1);
        CHECK_FALSE(e.report.converged);
        CHECK_FALSE(e.report.deltas.empty());
    }
}

TEST_CASE("reference solve tightens the error by the refinement factor") {
    const auto sc = builtin_scenario("linear-ode");
    SolverConfig config = sc.config;
    config.n = 100;
    const Grid coarse = config.make_grid(sc.spec.T0, sc.spec.T);
    const Trajectory plain = catching_up(sc.spec, config);
    const Trajectory ref = reference_solve(sc.spec, coarse, 8);
    const double err_plain = std::abs(plain.states.back()(0) - 2.718281828459045);
    const double err_ref = std::abs(ref.states.back()(0) - 2.718281828459045);
    CHECK(err_plain / err_ref >= 6.0);
    CHECK(err_plain / err_ref <= 10.0);
    CHECK_THROWS_AS(reference_solve(sc.spec, coarse, 2), std::invalid_argument);

    // static trivial scenario: reference equals the coarse run exactly
    const auto rest = builtin_scenario("static-rest");
    SolverConfig rc = rest.config;
    rc.n = 40;
    const Grid rest_grid = rc.make_grid(rest.spec.T0, rest.spec.T);
    CHECK(sup_distance(catching_up(rest.spec, rc), reference_solve(rest.spec, rest_grid, 8)) ==
          0.0);
}

TEST_CASE("reparametrized runs agree with direct ones") {
    SUBCASE("phi == 1 reproduces the direct run bitwise") {
        const auto sc = builtin_scenario("linear-ode");
        SolverConfig config = sc.config;
        config.n = 100;
        const auto direct = fixed_point_solve(sc.spec, config);
        config.reparametrize = true;
        const auto mapped = fixed_point_solve(sc.spec, config);
        CHECK(sup_distance(direct.traj, mapped.traj) == 0.0);
    }
    SUBCASE("time-varying phi stays within the step tolerance") {
        const auto sc = builtin_scenario("ramp-drive");
        SolverConfig config = sc.config;
        config.n = 400;
        const double h = 1.0 / config.n;
        const auto direct = fixed_point_solve(sc.spec, config);
        config.reparametrize = true;
        const auto mapped = fixed_point_solve(sc.spec, config);
        CHECK(sup_distance(direct.traj, mapped.traj) <= 2.0 * config.tol_fp + 5.0 * h);
        // closed form x(t) = t^2
        CHECK(std::abs(mapped.traj.states.back()(0) - 1.0) <= 5.0 * h);
    }
}

TEST_CASE("identical inputs give bitwise-identical trajectories") {
    const auto sc = builtin_scenario("drifting-corral");
    SolverConfig config = sc.config;
    config.n = 150;
    const Trajectory a = catching_up(sc.spec, config);
    const Trajectory b = catching_up(sc.spec, config);
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        CHECK(a.states[k] == b.states[k]);
    }
}

TEST_CASE("sphere scenario stays on the circle and matches the rotation") {
    const auto sc = builtin_scenario("sphere-drift");
    SolverConfig config = sc.config;
    config.n = 800;
    const Trajectory traj = catching_up(sc.spec, config);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        CHECK(std::abs(traj.states[k].norm() - 1.0) <= 1e-12);
        const double t = traj.grid[k];
        CHECK((traj.states[k] - vec2(std::cos(t), std::sin(t))).norm() <= 5.0 / config.n);
    }
}
