#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace vibroident {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using CVec6 = Eigen::Matrix<std::complex<double>, 6, 1>;
using CVec3 = Eigen::Matrix<std::complex<double>, 3, 1>;

inline constexpr double kPi = 3.14159265358979323846;

/// Generalized coordinate names in order.
inline constexpr const char* kDofNames[6] = {"dx", "dy", "dz", "rx", "ry", "rz"};

/// Excited degree of freedom of a test.
enum class Dof { X, Y, Z, Yaw };

const char* to_string(Dof dof);
Dof dof_from_string(const std::string& s);

} // namespace vibroident
