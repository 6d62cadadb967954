#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vibroident/types.hpp"

namespace vibroident {

enum class ProgramKind { Stepped, Sweep };

struct ForcePoint {
    std::string id;
    Vec3 location = Vec3::Zero();  // m, relative to P0
    Vec3 direction = Vec3::UnitX();
    double amplitude = 0.0;        // N; sign encodes phase 0 / pi
    /// Optional (f Hz, amplitude N) pairs, piecewise linear and clamped; overrides `amplitude`.
    std::vector<std::pair<double, double>> profile;

    double amplitude_at(double f) const;
};

struct SteppedSpec {
    std::vector<double> frequencies;
    double duration_per_step = 0.0;  // s
    double cycles_per_step = 0.0;
    double rest_gap = 5.0;           // s
};

struct SweepSpec {
    double f0 = 1.0;
    double f1 = 18.0;
    double rate = 0.2;  // Hz/s
};

struct ProgramStep {
    double t_start = 0.0;
    double t_end = 0.0;
    double frequency = 0.0;
};

struct Drive {
    bool active = false;
    double frequency = 0.0;  // instantaneous, Hz
    double phase = 0.0;      // rad
    double value = 0.0;      // sin(phase) when active
};

struct ExcitationProgram {
    ProgramKind kind = ProgramKind::Stepped;
    Dof dof = Dof::X;
    SteppedSpec stepped;
    SweepSpec sweep;
    std::vector<ForcePoint> force_points;
    double force_scale = 1.0;

    void validate() const;
    double duration() const;
    double max_frequency() const;
    std::vector<ProgramStep> steps() const;
    Drive drive(double t) const;
    /// Force of point k in N at a drive state.
    double point_force(std::size_t k, const Drive& d) const;
    Vec6 generalized_force(double t) const;
    /// Phasor of the generalized force at frequency f (sine reference).
    CVec6 force_phasor(double f) const;
    /// Upper bound of the generalized force magnitude over the program.
    Vec6 peak_force() const;
};

ExcitationProgram program_from_json(const nlohmann::json& j);
nlohmann::json program_to_json(const ExcitationProgram& p);
ExcitationProgram load_program(const std::string& path);

} // namespace vibroident
