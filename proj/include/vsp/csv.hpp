#pragma once

#include "vsp/analysis.hpp"
#include "vsp/gronwall.hpp"
#include "vsp/study.hpp"

#include <filesystem>

namespace vsp {

// CSV artifacts. Floats are written with 17 significant digits so values
// round-trip exactly; every file starts with a header row.

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj);
void write_envelope_csv(const std::filesystem::path& file, const Trajectory& traj,
                        const BoundEnvelope& env);
void write_dependence_csv(const std::filesystem::path& file, const DependenceReport& report);
void write_slow_csv(const std::filesystem::path& file, const SlowResidual& slow);
void write_bound_curve_csv(const std::filesystem::path& file, const BoundCurve& curve);

void write_study_csv(const std::filesystem::path& file, const std::vector<StudyRow>& rows);

}  // namespace vsp
