#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vibroident/types.hpp"

namespace vibroident {

struct SpringElement {
    Vec3 attach = Vec3::Zero();     // m, relative to CG
    Vec3 direction = Vec3::UnitZ(); // unit
    double k = 0.0;                 // N/m
    double c = 0.0;                 // N s/m
};

struct RigidBlockModel {
    double mass = 0.0;
    Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
    Vec3 cg = Vec3::Zero();
    std::vector<SpringElement> springs;

    void validate() const;
};

struct SystemMatrices {
    Mat6 M = Mat6::Zero();
    Mat6 C = Mat6::Zero();
    Mat6 K = Mat6::Zero();
};

struct AssembleOptions {
    /// Accept a singular K (single springs, partial layouts).
    bool allow_mechanism = false;
};

/// Row mapping generalized coordinates to displacement along `direction` at `attach`.
Eigen::Matrix<double, 1, 6> spring_row(const Vec3& attach, const Vec3& direction);

SystemMatrices assemble_system(const RigidBlockModel& model, AssembleOptions options = {});

struct Mode {
    double frequency_hz = 0.0;
    Vec6 shape = Vec6::Zero();  // mass-normalized, largest component positive
    int dominant_dof() const;
};

std::vector<Mode> modal_properties(const SystemMatrices& sys);

/// Index of the mode whose shape is most dominated by generalized coordinate `dof`.
std::size_t mode_for_dof(const std::vector<Mode>& modes, const SystemMatrices& sys, int dof);

/// Solves (K - w^2 M + i w C) u = F.
CVec6 steady_state_response(const SystemMatrices& sys, const CVec6& force, double omega);

enum class DashpotRule {
    Uniform,      // m_trib = mass / N
    PerDirection  // m_trib = mass * sum_a d_a^2 / N_a, N_a = sum_j d_ja^2
};

DashpotRule dashpot_rule_from_string(const std::string& s);
const char* to_string(DashpotRule rule);

/// Sets c = 2 zeta sqrt(k m_trib) on every spring.
void assign_dashpots(RigidBlockModel& model, double zeta, DashpotRule rule);

RigidBlockModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const RigidBlockModel& model);
RigidBlockModel load_model(const std::string& path);

} // namespace vibroident
