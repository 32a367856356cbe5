#pragma once

#include <Eigen/Dense>

namespace minsurf {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

}  // namespace minsurf
