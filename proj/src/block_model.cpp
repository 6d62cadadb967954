#include "vibroident/block_model.hpp"

#include <cmath>

#include "vibroident/errors.hpp"
#include "vibroident/layout.hpp"

namespace vibroident {

void RigidBlockModel::validate() const {
    if (!(mass > 0)) throw ConfigError("model mass must be positive");
    if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-9 * inertia.cwiseAbs().maxCoeff())
        throw ConfigError("inertia tensor is not symmetric");
    Eigen::LLT<Eigen::Matrix3d> llt(inertia);
    if (llt.info() != Eigen::Success) throw ConfigError("inertia tensor is not positive definite");
    for (std::size_t i = 0; i < springs.size(); ++i) {
        const auto& s = springs[i];
        if (std::abs(s.direction.norm() - 1.0) > 1e-12)
            throw ConfigError("spring " + std::to_string(i) + ": direction is not a unit vector");
        if (s.k < 0 || s.c < 0) throw ConfigError("spring " + std::to_string(i) + ": negative k or c");
    }
}

Eigen::Matrix<double, 1, 6> spring_row(const Vec3& attach, const Vec3& direction) {
    Eigen::Matrix<double, 1, 6> b;
    b.head<3>() = direction.transpose();
    b.tail<3>() = attach.cross(direction).transpose();
    return b;
}

SystemMatrices assemble_system(const RigidBlockModel& model, AssembleOptions options) {
    model.validate();
    SystemMatrices sys;
    for (const auto& s : model.springs) {
        auto b = spring_row(s.attach, s.direction);
        Mat6 bb = b.transpose() * b;
        sys.K += s.k * bb;
        sys.C += s.c * bb;
    }
    sys.K = 0.5 * (sys.K + sys.K.transpose());
    sys.C = 0.5 * (sys.C + sys.C.transpose());
    sys.M.topLeftCorner<3, 3>() = model.mass * Eigen::Matrix3d::Identity();
    sys.M.bottomRightCorner<3, 3>() = model.inertia;

    if (!options.allow_mechanism) {
        Eigen::SelfAdjointEigenSolver<Mat6> es(sys.K, Eigen::EigenvaluesOnly);
        double hi = es.eigenvalues().cwiseAbs().maxCoeff();
        if (!(es.eigenvalues().minCoeff() > 1e-12 * hi))
            throw AssemblyError("stiffness matrix is singular: mechanism detected");
    }
    return sys;
}

int Mode::dominant_dof() const {
    int idx = 0;
    shape.cwiseAbs().maxCoeff(&idx);
    return idx;
}

std::vector<Mode> modal_properties(const SystemMatrices& sys) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> es(sys.K, sys.M);
    if (es.info() != Eigen::Success) throw EigenError("generalized eigensolver did not converge");
    std::vector<Mode> modes;
    for (int i = 0; i < 6; ++i) {
        double lambda = es.eigenvalues()(i);
        if (lambda < 0) lambda = 0;
        Mode m;
        m.frequency_hz = std::sqrt(lambda) / (2.0 * kPi);
        m.shape = es.eigenvectors().col(i);
        int idx = 0;
        m.shape.cwiseAbs().maxCoeff(&idx);
        if (m.shape(idx) < 0) m.shape = -m.shape;
        modes.push_back(m);
    }
    return modes;
}

std::size_t mode_for_dof(const std::vector<Mode>& modes, const SystemMatrices& sys, int dof) {
    // Share of modal kinetic energy carried by the coordinate.
    std::size_t best = 0;
    double best_share = -1.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        Vec6 mphi = sys.M * modes[i].shape;
        double total = modes[i].shape.dot(mphi);
        double share = modes[i].shape(dof) * mphi(dof) / total;
        if (share > best_share) {
            best_share = share;
            best = i;
        }
    }
    return best;
}

CVec6 steady_state_response(const SystemMatrices& sys, const CVec6& force, double omega) {
    if (!(omega > 0)) throw DomainError("steady_state_response needs omega > 0");
    using CMat6 = Eigen::Matrix<std::complex<double>, 6, 6>;
    CMat6 D = (sys.K - omega * omega * sys.M).cast<std::complex<double>>() +
              std::complex<double>(0.0, omega) * sys.C.cast<std::complex<double>>();
    Eigen::FullPivLU<CMat6> lu(D);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw SolveError("dynamic stiffness matrix is singular at omega=" + std::to_string(omega));
    return lu.solve(force);
}

DashpotRule dashpot_rule_from_string(const std::string& s) {
    if (s == "uniform") return DashpotRule::Uniform;
    if (s == "per_direction") return DashpotRule::PerDirection;
    throw ConfigError("unknown dashpot rule '" + s + "'");
}

const char* to_string(DashpotRule rule) {
    return rule == DashpotRule::Uniform ? "uniform" : "per_direction";
}

void assign_dashpots(RigidBlockModel& model, double zeta, DashpotRule rule) {
    if (model.springs.empty()) return;
    Vec3 n_axis = Vec3::Zero();
    for (const auto& s : model.springs) n_axis += s.direction.cwiseAbs2();
    for (auto& s : model.springs) {
        double m_trib = 0.0;
        if (rule == DashpotRule::Uniform) {
            m_trib = model.mass / static_cast<double>(model.springs.size());
        } else {
            for (int a = 0; a < 3; ++a)
                if (n_axis(a) > 0) m_trib += model.mass * s.direction(a) * s.direction(a) / n_axis(a);
        }
        s.c = 2.0 * zeta * std::sqrt(s.k * m_trib);
    }
}

RigidBlockModel model_from_json(const nlohmann::json& j) {
    RigidBlockModel m;
    try {
        m.mass = j.at("mass").get<double>();
        const auto& I = j.at("inertia");
        if (I.size() != 3) throw ConfigError("inertia must be 3x3");
        for (int r = 0; r < 3; ++r) {
            if (I[r].size() != 3) throw ConfigError("inertia must be 3x3");
            for (int c = 0; c < 3; ++c) m.inertia(r, c) = I[r][c].get<double>();
        }
        if (j.contains("cg")) m.cg = vec3_from_json(j.at("cg"));
        for (const auto& s : j.at("springs")) {
            SpringElement e;
            e.attach = vec3_from_json(s.at("attach"));
            e.direction = vec3_from_json(s.at("dir"));
            e.k = s.at("k").get<double>();
            e.c = s.value("c", 0.0);
            m.springs.push_back(e);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
    if (j.contains("dashpots")) {
        const auto& d = j.at("dashpots");
        assign_dashpots(m, d.value("zeta", 0.37), dashpot_rule_from_string(d.value("rule", "per_direction")));
    }
    m.validate();
    return m;
}

nlohmann::json model_to_json(const RigidBlockModel& model) {
    nlohmann::json j;
    j["mass"] = model.mass;
    j["inertia"] = nlohmann::json::array();
    for (int r = 0; r < 3; ++r)
        j["inertia"].push_back({model.inertia(r, 0), model.inertia(r, 1), model.inertia(r, 2)});
    j["cg"] = vec3_to_json(model.cg);
    j["springs"] = nlohmann::json::array();
    for (const auto& s : model.springs)
        j["springs"].push_back(
            {{"attach", vec3_to_json(s.attach)}, {"dir", vec3_to_json(s.direction)}, {"k", s.k}, {"c", s.c}});
    return j;
}

RigidBlockModel load_model(const std::string& path) { return model_from_json(load_json(path)); }

} // namespace vibroident
