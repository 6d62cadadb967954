#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vibroident/layout.hpp"
#include "vibroident/rigid_motion.hpp"
#include "vibroident/sine_fit.hpp"
#include "vibroident/timeseries.hpp"
#include "vibroident/types.hpp"

namespace vibroident {

/// A1 / omega^2 for an acceleration fit.
double displacement_amplitude(const SineFit& fit);

struct ForceGeometry {
    std::string id;
    Vec3 location = Vec3::Zero();  // m, relative to P0
    Vec3 direction = Vec3::UnitX();
};

struct ForceAmplitude {
    double resultant = 0.0;  // kN, norm of the complex resultant vector
    double torque = 0.0;     // kN m, about the vertical axis through P0
    Vec3 components = Vec3::Zero();  // |Fx|, |Fy|, |Fz| in kN
    CVec3 resultant_phasor = CVec3::Zero();
    std::complex<double> torque_phasor;
    std::vector<SineFit> fits;

    /// Scaling amplitude for a test: torque for Yaw, resultant otherwise.
    double for_dof(Dof dof) const { return dof == Dof::Yaw ? torque : resultant; }
};

/// Per-channel sine fits combined through the actuator geometry. low_freq_cut > 0 removes sub-cut content first.
ForceAmplitude estimate_force_amplitude(const TimeSeriesSet& channels, const std::vector<ForceGeometry>& geometry,
                                        double f, double low_freq_cut = 0.0);

enum class CurveKind { Station, Group, Rigid };

inline constexpr const char* kRigidCurveId = "RBM";

struct FrcPoint {
    double f = 0.0;
    std::string id;
    std::string axis;
    CurveKind kind = CurveKind::Station;
    double u_scaled_mm = 0.0;
    double F_measured = 0.0;
    double F_ref = 0.0;

    double u_measured_mm() const { return u_scaled_mm * F_measured / F_ref; }
};

struct CurvePoint {
    double f = 0.0;
    double u = 0.0;
};

struct FrequencyResponseCurve {
    Dof dof = Dof::X;
    std::vector<FrcPoint> points;

    /// Points of one id/axis ordered by frequency.
    std::vector<CurvePoint> curve(const std::string& id, const std::string& axis) const;
    std::vector<std::string> ids(CurveKind kind) const;
};

struct StationAmplitudes {
    double f = 0.0;
    std::map<std::string, Vec3> amplitude_m;  // per station, per measured axis
};

struct ForceAtFrequency {
    double f = 0.0;
    double F_measured = 0.0;  // kN or kN m
};

struct BuildOptions {
    double F_ref = 6800.0;
    double rotation_arm = 16.5;  // m, multiplies rotations in the rigid curve
};

FrequencyResponseCurve build_frc(const std::vector<StationAmplitudes>& amplitudes,
                                 const std::vector<ForceAtFrequency>& forces, const SensorLayout& layout, Dof dof,
                                 const BuildOptions& options, const std::vector<RigidMotion>* rigid = nullptr);

struct NaturalFrequency {
    double f = 0.0;
    double amplitude = 0.0;
    bool flat = false;  // top two values within 5%
};

NaturalFrequency natural_frequency(const FrequencyResponseCurve& frc, const std::string& id, const std::string& axis);

struct LinearitySelection {
    std::optional<std::string> id;
    std::optional<std::string> axis;
};

/// RMS difference of scaled amplitudes over shared (id, axis, f) with f > exclude_below.
double linearity_rms(const FrequencyResponseCurve& a, const FrequencyResponseCurve& b, double exclude_below = 2.0,
                     const LinearitySelection& selection = {});

void write_frc_csv(std::ostream& out, const FrequencyResponseCurve& frc);
FrequencyResponseCurve parse_frc_csv(std::istream& in);
FrequencyResponseCurve load_frc_csv(const std::string& path);

/// Name of the station axis excited by a DOF ("x", "y", "z"); Yaw maps to "y".
std::string excited_axis(Dof dof);

} // namespace vibroident
