#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vibroident/block_model.hpp"
#include "vibroident/damping.hpp"
#include "vibroident/excitation.hpp"
#include "vibroident/filter.hpp"
#include "vibroident/frc.hpp"
#include "vibroident/layout.hpp"
#include "vibroident/rigid_motion.hpp"
#include "vibroident/sensors.hpp"
#include "vibroident/sine_fit.hpp"

namespace vibroident {

struct SimulationSettings {
    double dt = 1.0 / 2000.0;
    double response_rate = 200.0;
    double force_rate = 512.0;
    double response_noise_rms = 0.0;  // m/s^2
    double force_noise_rms = 0.0;     // kN
    double harmonic_amplitude = 0.0;  // m/s^2
    int harmonic_order = 2;
    double force_low_freq_amplitude = 0.0;  // kN
    double force_low_freq_hz = 0.0;
};

struct FilterSettings {
    int order = 5;
    double f_lo = 1.0;
    double f_hi = 25.0;
    bool compensate_gain = true;
};

struct WindowSettings {
    WindowPolicy stepped{10.0, 40.0};
    double sweep_len = 2.0;
};

struct AnalysisSettings {
    std::vector<double> frequencies;  // sweep analysis grid; empty selects a default
    double low_freq_cut = 0.0;
    double F_ref = 6800.0;          // kN
    double torque_ref = 117000.0;   // kN m
    double rotation_arm = 16.5;     // m
    XiGrid xi_grid;
    double r_min = 0.3;
    double r_max = 1.5;
    double contribution_floor = 1e-3;
    std::vector<std::string> curvature_stations;
    double curvature_fiber = 2.9;   // m
};

struct RunConfig {
    std::string config_path;
    std::string model_path, program_path, layout_path;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    SimulationSettings simulation;
    FilterSettings filter;
    WindowSettings window;
    AnalysisSettings analysis;

    void validate() const;
};

/// Paths inside the document resolve relative to the config file's directory.
RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j, const std::string& base_dir);

struct SimulationResult {
    TimeSeriesSet response;
    TimeSeriesSet force;
    SystemMatrices system;
    std::vector<Mode> modes;
    nlohmann::json manifest;
};

SimulationResult simulate(const RunConfig& cfg, const RigidBlockModel& model, const ExcitationProgram& program,
                          const SensorLayout& layout);

/// Ground-truth displacement phasor of a station for a program frequency, scaled so the DOF force equals F_ref.
CVec3 ground_truth_displacement(const SystemMatrices& sys, const ExcitationProgram& program, const Vec3& position,
                                double f, double F_ref);

struct FrequencyAnalysis {
    double f = 0.0;
    Window window;
    std::vector<StationPhasors> stations;  // displacement phasors, m
    ForceAmplitude force;
    double F_measured = 0.0;
    RigidMotion rigid;
    std::array<std::optional<double>, 3> contribution;
};

struct AnalysisResult {
    Dof dof = Dof::X;
    double F_ref = 0.0;
    std::vector<FrequencyAnalysis> per_frequency;
    FrequencyResponseCurve frc;
    NaturalFrequency natural;
    std::string natural_curve;
    DampingEstimate damping;
    double amplification = 0.0;
    std::optional<double> strain;
    int unconverged_fits = 0;
    FilterCoefficients filter;
};

std::vector<ForceGeometry> force_geometry(const ExcitationProgram& program);

AnalysisResult analyze(const RunConfig& cfg, const ExcitationProgram& program, const SensorLayout& layout,
                       const TimeSeriesSet& response, const TimeSeriesSet& force);

/// Curve the natural frequency is read from: mean over stations on the excited axis, or rz for Yaw.
std::vector<CurvePoint> peak_curve(const FrequencyResponseCurve& frc, std::string* name = nullptr);

/// Serialized outputs keyed by file name.
std::map<std::string, std::string> render_analysis(const AnalysisResult& result, const SensorLayout& layout);

std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h = 14695981039346656037ull);
std::string read_file(const std::string& path);

/// Writes each file to a temporary name, then renames all of them into place.
void write_bundle_atomic(const std::string& dir, const std::map<std::string, std::string>& files);

} // namespace vibroident
