#pragma once

#include "vsp/analysis.hpp"
#include "vsp/solver.hpp"

#include <filesystem>
#include <string>

namespace vsp {

struct VerifyToggles {
    bool envelopes = false;
    bool slow = false;
    bool gronwall = false;
    std::string dependence_ref;  // relative path of the second scenario; empty = off
};

struct Scenario {
    std::string name;
    int dimension = 1;
    ProblemSpec spec;
    SolverConfig config;
    VerifyToggles verify;
};

/// Parses a scenario file (JSON, one scenario per file). Parse errors carry
/// line/column anchors; validation errors cite the offending field. Declared
/// moduli are sampled against the evaluators and feasibility of x0 is checked,
/// so a loaded scenario is ready to solve.
Scenario load_scenario(const std::filesystem::path& file);

/// The stock scenarios used by tests and the self-test: static, moving, convex
/// and sphere sets, with and without Volterra memory, each with a closed-form
/// or cross-checkable solution.
std::vector<Scenario> builtin_scenarios();
Scenario builtin_scenario(const std::string& name);

}  // namespace vsp
