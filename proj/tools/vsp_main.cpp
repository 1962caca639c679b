#include "vsp/csv.hpp"
#include "vsp/scenario.hpp"
#include "vsp/selftest.hpp"
#include "vsp/study.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>

namespace {

using namespace vsp;

constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsageOrParse = 2;

double sup_distance(const Trajectory& a, const Trajectory& b) {
    double sup = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        sup = std::max(sup, (a.states[k] - b.states[k]).norm());
    return sup;
}

void print_check(const std::string& label, bool pass, double value) {
    std::cout << label << (pass ? ": PASS" : ": FAIL") << " (margin " << std::scientific
              << std::setprecision(3) << value << ")\n";
}

Trajectory solve_with_config(const ProblemSpec& spec, const SolverConfig& config) {
    if (config.scheme == Scheme::FixedPoint) {
        const FixedPointResult result = fixed_point_solve(spec, config);
        std::cout << "fixed-point converged in " << result.report.iterations
                  << " iterations (residual " << std::scientific << std::setprecision(3)
                  << result.report.residual << ")\n";
        return result.traj;
    }
    return catching_up(spec, config);
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir) {
    Scenario sc;
    try {
        sc = load_scenario(scenario_path);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageOrParse;
    }

    const std::filesystem::path out(out_dir);
    bool all_pass = true;
    try {
        const Trajectory traj = solve_with_config(sc.spec, sc.config);
        write_trajectory_csv(out / "trajectory.csv", traj);
        const double h = max_step(traj.grid);

        const BoundEnvelope env = compute_envelopes(sc.spec, traj.grid);
        write_envelope_csv(out / "envelope.csv", traj, env);
        if (sc.verify.envelopes) {
            const EnvelopeCheck check = check_envelopes(traj, env, 5.0 * h + 1e-9);
            print_check("envelopes", check.pass, std::min(check.r_margin, check.theta_margin));
            all_pass = all_pass && check.pass;
        }

        if (sc.verify.slow) {
            const SlowResidual slow = slow_residual(traj, sc.spec);
            write_slow_csv(out / "slow.csv", slow);
            double theta_max = 0.0;
            for (double th : env.theta) theta_max = std::max(theta_max, th);
            const double tol = 5.0 * h * (1.0 + theta_max) + 1e-9;
            const bool pass = slow.max_residual <= tol;
            print_check("slow residual", pass, tol - slow.max_residual);
            all_pass = all_pass && pass;
        }

        if (!sc.verify.dependence_ref.empty()) {
            const auto sibling =
                std::filesystem::path(scenario_path).parent_path() / sc.verify.dependence_ref;
            Scenario other;
            try {
                other = load_scenario(sibling);
            } catch (const ScenarioError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsageOrParse;
            }
            SolverConfig shared_config = sc.config;  // both on the primary grid
            const Trajectory x1 = catching_up(sc.spec, shared_config);
            const Trajectory x2 = catching_up(other.spec, shared_config);
            const double tol = 5.0 * h + 1e-6;
            const auto general =
                dependence_bound(sc.spec, other.spec, x1, x2, DependenceVariant::GeneralZ);
            write_dependence_csv(out / "dependence.csv", general);
            print_check("dependence (general-z)", general.margin >= -tol, general.margin);
            all_pass = all_pass && general.margin >= -tol;
            const bool shared_z =
                (sc.spec.z.value(sc.spec.T0) - other.spec.z.value(other.spec.T0)).norm() < 1e-12 &&
                (sc.spec.z.value(sc.spec.T) - other.spec.z.value(other.spec.T)).norm() < 1e-12;
            if (shared_z) {
                const auto shared =
                    dependence_bound(sc.spec, other.spec, x1, x2, DependenceVariant::SharedZ);
                write_dependence_csv(out / "dependence_shared.csv", shared);
                print_check("dependence (shared-z)", shared.margin >= -tol, shared.margin);
                all_pass = all_pass && shared.margin >= -tol;
            }
        }

        if (sc.verify.gronwall) {
            for (const auto& gc : builtin_gronwall_cases()) {
                const Grid grid = uniform_grid(gc.data.T0, gc.data.T, 500);
                BoundCurve bound;
                switch (gc.data.variant) {
                    case GronwallVariant::I: bound = gronwall_I(gc.data, grid); break;
                    case GronwallVariant::IIa: bound = gronwall_II(gc.data, grid); break;
                    case GronwallVariant::IIb: bound = gronwall_II_sqrt(gc.data, grid); break;
                }
                write_bound_curve_csv(out / ("gronwall_" + gc.name + ".csv"), bound);
                const auto report = verify_dominance(bound, gc.data, grid);
                print_check("gronwall " + gc.name, report.margin >= -1e-6, report.margin);
                all_pass = all_pass && report.margin >= -1e-6;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageOrParse;
    }
    return all_pass ? 0 : kExitVerificationFailed;
}

int cmd_study(const std::string& scenario_path, const std::vector<int>& grids,
              const std::string& out_dir) {
    Scenario sc;
    try {
        sc = load_scenario(scenario_path);
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageOrParse;
    }
    try {
        const ConvergenceStudy study = convergence_study(sc.spec, sc.config, grids);
        write_study_csv(std::filesystem::path(out_dir) / "study.csv", study.rows);
        std::cout << "h,error,order\n" << std::scientific << std::setprecision(6);
        for (const auto& row : study.rows) {
            std::cout << row.h << "," << row.error << ",";
            if (row.exact) std::cout << "exact";
            else if (!std::isnan(row.order)) std::cout << std::setprecision(3) << row.order
                                                       << std::setprecision(6);
            std::cout << "\n";
        }
        if (study.exact)
            std::cout << "all errors at roundoff level; order table marked exact\n";
        else
            std::cout << "fitted order: " << std::fixed << std::setprecision(3)
                      << study.fitted_order << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageOrParse;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver and verification toolkit for integro-differential sweeping processes"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = ".";
    std::vector<int> grids;

    auto* run = app.add_subcommand("run", "solve a scenario file and run its verifications");
    run->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    run->add_option("--out", out_dir, "output directory for CSV artifacts");

    auto* study = app.add_subcommand("study", "convergence study over a list of grid sizes");
    study->add_option("scenario", scenario_path, "scenario file (JSON)")->required();
    study->add_option("--grids", grids, "grid sizes, e.g. --grids 50,100,200,400")
        ->required()
        ->delimiter(',');
    study->add_option("--out", out_dir, "output directory for CSV artifacts");

    auto* selftest = app.add_subcommand("selftest", "run the built-in verification sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsageOrParse;
    }

    if (run->parsed()) return cmd_run(scenario_path, out_dir);
    if (study->parsed()) return cmd_study(scenario_path, grids, out_dir);
    if (selftest->parsed()) return vsp::run_selftest(std::cout) == 0 ? 0 : kExitVerificationFailed;
    return kExitUsageOrParse;
}
