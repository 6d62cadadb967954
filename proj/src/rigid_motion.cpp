#include "vibroident/rigid_motion.hpp"

#include <cmath>

#include "vibroident/errors.hpp"

namespace vibroident {

Eigen::Matrix<double, 3, 6> alpha(const Vec3& r) {
    const double x = r.x(), y = r.y(), z = r.z();
    Eigen::Matrix<double, 3, 6> m;
    m << 1, 0, 0, 0, z, -y,
         0, 1, 0, -z, 0, x,
         0, 0, 1, y, -x, 0;
    return m;
}

CVec3 rigid_displacement(const CVec6& delta0, const Vec3& r) {
    return alpha(r).cast<std::complex<double>>() * delta0;
}

RigidMotion fit_rigid_body(const std::vector<StationPhasors>& stations) {
    std::size_t rows = 0;
    for (const auto& s : stations) rows += s.components.size();
    if (rows < 6) throw RankError("need at least 6 measured components, got " + std::to_string(rows));

    Eigen::MatrixXd A(rows, 6);
    Eigen::MatrixXd V(rows, 2);
    std::size_t r = 0;
    for (const auto& s : stations) {
        auto al = alpha(s.position);
        for (const auto& c : s.components) {
            A.row(r) = c.axis.transpose() * al;
            V(r, 0) = c.value.real();
            V(r, 1) = c.value.imag();
            ++r;
        }
    }
    // Column scaling keeps rotations and translations comparable.
    Eigen::VectorXd scale = A.colwise().norm().transpose();
    for (int j = 0; j < 6; ++j)
        if (scale(j) == 0) scale(j) = 1.0;
    Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv(5) > 1e-10 * sv(0))) {
        Eigen::VectorXd dir = scale.cwiseInverse().asDiagonal() * svd.matrixV().col(5);
        int idx = 0;
        dir.cwiseAbs().maxCoeff(&idx);
        throw RankError(std::string("rigid-body system is rank deficient; unobservable direction ") + kDofNames[idx]);
    }
    Eigen::MatrixXd X = scale.cwiseInverse().asDiagonal() * svd.solve(V);

    RigidMotion out;
    for (int j = 0; j < 6; ++j) out.delta0(j) = {X(j, 0), X(j, 1)};
    Eigen::MatrixXd R = V - A * X;
    out.residual_norm = R.norm();
    out.residual_rms = out.residual_norm / std::sqrt(static_cast<double>(rows));
    out.n_stations = static_cast<int>(stations.size());
    out.n_components = static_cast<int>(rows);
    return out;
}

std::array<std::optional<double>, 3> rbm_contribution(const std::vector<StationPhasors>& stations,
                                                      const RigidMotion& rigid, double floor_ratio) {
    double max_amp = 0.0;
    for (const auto& s : stations)
        for (const auto& c : s.components) max_amp = std::max(max_amp, std::abs(c.value));
    double floor = floor_ratio * max_amp;

    std::array<double, 3> sum_v{}, sum_u{};
    std::array<int, 3> count{};
    for (const auto& s : stations) {
        CVec3 v = rigid_displacement(rigid.delta0, s.position);
        for (const auto& c : s.components) {
            int ax = 0;
            c.axis.cwiseAbs().maxCoeff(&ax);
            double u = std::abs(c.value);
            if (!(u > floor)) continue;
            std::complex<double> pred = c.axis.cast<std::complex<double>>().dot(v);
            sum_v[ax] += std::abs(pred);
            sum_u[ax] += u;
            ++count[ax];
        }
    }
    std::array<std::optional<double>, 3> out;
    for (int a = 0; a < 3; ++a)
        if (count[a] > 0) out[a] = 100.0 * sum_v[a] / sum_u[a];
    return out;
}

double curvature_strain(const std::array<CurvaturePoint, 3>& p, double c) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (p[i].x == p[j].x) throw GeometryError("curvature_strain needs 3 distinct x positions");
    // Second divided difference equals the leading coefficient of the interpolating parabola.
    double d01 = (p[1].w_mm - p[0].w_mm) / (p[1].x - p[0].x);
    double d12 = (p[2].w_mm - p[1].w_mm) / (p[2].x - p[1].x);
    double a = (d12 - d01) / (p[2].x - p[0].x) * 1e-3;  // 1/m
    return 2.0 * a * c;
}

} // namespace vibroident
