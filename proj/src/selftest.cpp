#include "vsp/selftest.hpp"

#include "vsp/analysis.hpp"
#include "vsp/gronwall.hpp"
#include "vsp/scenario.hpp"
#include "vsp/solver.hpp"

#include <cmath>
#include <iomanip>

namespace vsp {

namespace {

struct Tally {
    std::ostream& out;
    int failures = 0;

    void check(const std::string& label, bool pass, double value) {
        out << (pass ? "[ ok ] " : "[FAIL] ") << label << " (" << std::scientific
            << std::setprecision(3) << value << ")\n";
        if (!pass) ++failures;
    }
};

double sup_distance(const Trajectory& a, const Trajectory& b) {
    double sup = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        sup = std::max(sup, (a.states[k] - b.states[k]).norm());
    return sup;
}

}  // namespace

int run_selftest(std::ostream& out) {
    Tally tally{out};

    out << "== Gronwall dominance ==\n";
    for (const auto& gc : builtin_gronwall_cases()) {
        const Grid grid = uniform_grid(gc.data.T0, gc.data.T, 500);
        BoundCurve bound;
        switch (gc.data.variant) {
            case GronwallVariant::I: bound = gronwall_I(gc.data, grid); break;
            case GronwallVariant::IIa: bound = gronwall_II(gc.data, grid); break;
            case GronwallVariant::IIb: bound = gronwall_II_sqrt(gc.data, grid); break;
        }
        const auto report = verify_dominance(bound, gc.data, grid);
        tally.check("gronwall " + gc.name + " margin", report.margin >= -1e-6, report.margin);
    }

    out << "== Scheme agreement and envelopes ==\n";
    for (const auto& sc : builtin_scenarios()) {
        SolverConfig config = sc.config;
        config.n = 200;
        const double h = (sc.spec.T - sc.spec.T0) / config.n;
        try {
            const Trajectory direct = catching_up(sc.spec, config);
            const FixedPointResult fp = fixed_point_solve(sc.spec, config);
            const double gap = sup_distance(direct, fp.traj);
            tally.check(sc.name + " scheme gap", gap <= config.tol_fp + 5.0 * h, gap);
            tally.check(sc.name + " iterations",
                        fp.report.converged && fp.report.iterations <= config.max_iterations,
                        static_cast<double>(fp.report.iterations));
            const BoundEnvelope env = compute_envelopes(sc.spec, direct.grid);
            const EnvelopeCheck check = check_envelopes(direct, env, 5.0 * h + 1e-9);
            tally.check(sc.name + " envelope margins", check.pass,
                        std::min(check.r_margin, check.theta_margin));
        } catch (const std::exception& e) {
            out << "[FAIL] " << sc.name << " raised: " << e.what() << "\n";
            ++tally.failures;
        }
    }

    out << "== Hypomonotonicity ==\n";
    {
        const auto box = make_box(Vec::Zero(2), Vec::Ones(2));
        const auto box_rep = check_hypomonotone(box, 0.0, 100, 7);
        tally.check("box normals monotone", box_rep.worst >= -1e-9, box_rep.worst);
        const auto sphere = make_sphere(Path::zero(2), 1.0);
        const auto sph_rep = check_hypomonotone(sphere, 0.0, 100, 7);
        tally.check("unit sphere 1/rho-hypomonotone", sph_rep.worst_slack >= -1e-9,
                    sph_rep.worst_slack);
    }

    out << (tally.failures == 0 ? "self-test passed" : "self-test FAILED") << " ("
        << tally.failures << " failures)\n";
    return tally.failures;
}

}  // namespace vsp
