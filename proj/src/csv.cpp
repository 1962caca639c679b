#include "vsp/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace vsp {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    return out;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& file, const Trajectory& traj) {
    auto out = open_out(file);
    const int d = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
    out << "t";
    for (int i = 1; i <= d; ++i) out << ",x" << i;
    for (int i = 1; i <= d; ++i) out << ",d" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.grid.size(); ++k) {
        out << fmt(traj.grid[k]);
        for (int i = 0; i < d; ++i) out << "," << fmt(traj.states[k](i));
        for (int i = 0; i < d; ++i) out << "," << fmt(traj.derivs[k](i));
        out << "\n";
    }
}

void write_envelope_csv(const std::filesystem::path& file, const Trajectory& traj,
                        const BoundEnvelope& env) {
    auto out = open_out(file);
    out << "t,norm_x,r,norm_d,theta\n";
    for (std::size_t k = 0; k < env.grid.size(); ++k)
        out << fmt(env.grid[k]) << "," << fmt(traj.states[k].norm()) << "," << fmt(env.r[k]) << ","
            << fmt(traj.derivs[k].norm()) << "," << fmt(env.theta[k]) << "\n";
}

void write_dependence_csv(const std::filesystem::path& file, const DependenceReport& report) {
    auto out = open_out(file);
    out << "t,measured,bound,Delta,delta,epsilon,nu\n";
    for (std::size_t k = 0; k < report.grid.size(); ++k)
        out << fmt(report.grid[k]) << "," << fmt(report.measured[k]) << "," << fmt(report.bound[k])
            << "," << fmt(report.Delta[k]) << "," << fmt(report.delta[k]) << ","
            << fmt(report.eps[k]) << "," << fmt(report.nu[k]) << "\n";
}

void write_slow_csv(const std::filesystem::path& file, const SlowResidual& slow) {
    auto out = open_out(file);
    out << "t,residual\n";
    for (std::size_t k = 0; k < slow.grid.size(); ++k)
        out << fmt(slow.grid[k]) << "," << fmt(slow.residual[k]) << "\n";
}

void write_bound_curve_csv(const std::filesystem::path& file, const BoundCurve& curve) {
    auto out = open_out(file);
    out << "t,value\n";
    for (std::size_t k = 0; k < curve.grid.size(); ++k)
        out << fmt(curve.grid[k]) << "," << fmt(curve.values[k]) << "\n";
}

void write_study_csv(const std::filesystem::path& file, const std::vector<StudyRow>& rows) {
    auto out = open_out(file);
    out << "h,error,order\n";
    for (const auto& row : rows) {
        out << fmt(row.h) << "," << fmt(row.error) << ",";
        if (row.exact) out << "exact";
        else if (std::isnan(row.order)) out << "";
        else out << fmt(row.order);
        out << "\n";
    }
}

}  // namespace vsp
