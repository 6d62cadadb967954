#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vibroident/types.hpp"

namespace vibroident {

struct MeasuredComponent {
    Vec3 axis = Vec3::UnitX();
    std::complex<double> value;  // displacement phasor along axis
};

struct StationPhasors {
    std::string id;
    Vec3 position = Vec3::Zero();
    std::vector<MeasuredComponent> components;
};

struct RigidMotion {
    double frequency = 0.0;
    CVec6 delta0 = CVec6::Zero();
    double residual_rms = 0.0;   // per stacked real component
    double residual_norm = 0.0;  // over real and imaginary parts
    int n_stations = 0;
    int n_components = 0;
};

/// Linearized rigid kinematics v = alpha(r) * delta0.
Eigen::Matrix<double, 3, 6> alpha(const Vec3& r);

/// Station displacement phasors predicted by a rigid motion.
CVec3 rigid_displacement(const CVec6& delta0, const Vec3& r);

RigidMotion fit_rigid_body(const std::vector<StationPhasors>& stations);

/// Per global axis percentage; nullopt when every station is below the floor on that axis.
std::array<std::optional<double>, 3> rbm_contribution(const std::vector<StationPhasors>& stations,
                                                      const RigidMotion& rigid, double floor_ratio = 1e-3);

struct CurvaturePoint {
    double x = 0.0;     // m
    double w_mm = 0.0;  // deformational vertical displacement, mm
};

/// Parabola through three points; returns kappa * c with kappa = 2a (1/m).
double curvature_strain(const std::array<CurvaturePoint, 3>& points, double c);

} // namespace vibroident
