// Generates the bundled block model: spring layout on the base of the block plus
// four stiffness knobs tuned so the X, Y, Z and yaw modes land on target frequencies.
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vibroident/block_model.hpp"
#include "vibroident/layout.hpp"

using namespace vibroident;

namespace {

struct Geometry {
    double length = 33.12, width = 16.91, height = 5.8;
    double mass = 1.0e7;
    int nvx = 9, nvy = 5;
    double edge_amplification = 2.0;
    double rocking_inertia_factor = 0.8;
    double zeta = 0.37;
    std::string rule = "per_direction";
};

// Knobs: khx, khy, kv (N/m per spring), yaw inertia factor.
RigidBlockModel build(const Geometry& g, const Eigen::Vector4d& knob) {
    RigidBlockModel m;
    m.mass = g.mass;
    double L = g.length, W = g.width, H = g.height;
    double ixx = g.mass * (W * W + H * H) / 12.0, iyy = g.mass * (L * L + H * H) / 12.0,
           izz = g.mass * (L * L + W * W) / 12.0;
    m.inertia = Eigen::Vector3d(g.rocking_inertia_factor * ixx, g.rocking_inertia_factor * iyy, knob(3) * izz).asDiagonal();
    double zb = -H / 2;
    auto on_edge = [&](double x, double y) {
        return std::abs(std::abs(x) - L / 2) < 1e-9 || std::abs(std::abs(y) - W / 2) < 1e-9;
    };
    for (int i = 0; i < g.nvx; ++i)
        for (int j = 0; j < g.nvy; ++j) {
            double x = -L / 2 + L * i / (g.nvx - 1), y = -W / 2 + W * j / (g.nvy - 1);
            m.springs.push_back({Vec3(x, y, zb), Vec3::UnitZ(), knob(2) * (on_edge(x, y) ? g.edge_amplification : 1.0), 0});
        }
    for (int i = 1; i + 1 < g.nvx; ++i) {
        double x = -L / 2 + L * i / (g.nvx - 1);
        for (int s : {-1, 1}) m.springs.push_back({Vec3(x, s * W / 2, zb), Vec3(0, s, 0), knob(1), 0});
    }
    for (int j = 1; j + 1 < g.nvy; ++j) {
        double y = -W / 2 + W * j / (g.nvy - 1);
        for (int s : {-1, 1}) m.springs.push_back({Vec3(s * L / 2, y, zb), Vec3(s, 0, 0), knob(0), 0});
    }
    for (int sx : {-1, 1})
        for (int sy : {-1, 1})
            m.springs.push_back({Vec3(sx * L / 2, sy * W / 2, zb), Vec3(sx, sy, 0).normalized(), 0.5 * (knob(0) + knob(1)), 0});
    assign_dashpots(m, g.zeta, dashpot_rule_from_string(g.rule));
    return m;
}

Eigen::Vector4d frequencies(const RigidBlockModel& m) {
    auto sys = assemble_system(m);
    auto modes = modal_properties(sys);
    const int dofs[4] = {0, 1, 2, 5};
    Eigen::Vector4d f;
    for (int k = 0; k < 4; ++k) f(k) = modes[mode_for_dof(modes, sys, dofs[k])].frequency_hz;
    return f;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tune the bundled block model to target modal frequencies"};
    Geometry g;
    Eigen::Vector4d target(9.75, 10.0, 15.0, 14.0);
    std::string out = "data/default_model.json";
    app.add_option("-o,--out", out, "Output model JSON");
    app.add_option("--mass", g.mass, "Block mass (kg)");
    app.add_option("--edge-amplification", g.edge_amplification, "Vertical spring factor on the perimeter");
    app.add_option("--fx", target(0), "Target X-dominant frequency (Hz)");
    app.add_option("--fy", target(1), "Target Y-dominant frequency (Hz)");
    app.add_option("--fz", target(2), "Target Z-dominant frequency (Hz)");
    app.add_option("--fyaw", target(3), "Target yaw-dominant frequency (Hz)");
    CLI11_PARSE(app, argc, argv);

    // Newton iteration in log space with a finite-difference Jacobian.
    Eigen::Vector4d x(std::log(5.2e9 * g.mass / 1e7), std::log(2.6e9 * g.mass / 1e7), std::log(1.3e9 * g.mass / 1e7),
                      std::log(0.38));
    auto eval = [&](const Eigen::Vector4d& lx) {
        return Eigen::Vector4d(frequencies(build(g, lx.array().exp().matrix())).array().log().matrix());
    };
    Eigen::Vector4d goal = target.array().log().matrix();
    for (int it = 0; it < 50; ++it) {
        Eigen::Vector4d r = eval(x) - goal;
        if (r.cwiseAbs().maxCoeff() < 1e-12) break;
        Eigen::Matrix4d J;
        for (int k = 0; k < 4; ++k) {
            Eigen::Vector4d xp = x;
            xp(k) += 1e-6;
            J.col(k) = (eval(xp) - eval(x)) / 1e-6;
        }
        x -= J.fullPivLu().solve(r);
    }
    Eigen::Vector4d knob = x.array().exp().matrix();
    RigidBlockModel m = build(g, knob);
    auto sys = assemble_system(m);
    auto modes = modal_properties(sys);

    nlohmann::json j = model_to_json(m);
    for (auto& s : j["springs"]) s.erase("c");
    j["dashpots"] = {{"zeta", g.zeta}, {"rule", g.rule}};
    nlohmann::json freqs = nlohmann::json::array();
    for (const auto& md : modes) freqs.push_back({{"frequency_hz", md.frequency_hz}, {"dominant", kDofNames[md.dominant_dof()]}});
    j["generator"] = {{"length", g.length},
                      {"width", g.width},
                      {"height", g.height},
                      {"vertical_grid", {g.nvx, g.nvy}},
                      {"edge_amplification", g.edge_amplification},
                      {"rocking_inertia_factor", g.rocking_inertia_factor},
                      {"yaw_inertia_factor", knob(3)},
                      {"khx", knob(0)},
                      {"khy", knob(1)},
                      {"kv", knob(2)},
                      {"targets_hz", {target(0), target(1), target(2), target(3)}},
                      {"modes", freqs}};
    std::ofstream os(out);
    if (!os) {
        std::cerr << "cannot write " << out << "\n";
        return 5;
    }
    os << j.dump(2) << "\n";
    for (const auto& md : modes)
        std::cout << kDofNames[md.dominant_dof()] << " " << md.frequency_hz << " Hz\n";
    return 0;
}
