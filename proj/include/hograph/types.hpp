#pragma once

#include <Eigen/Dense>

namespace hograph {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// One row per 3D point. Coordinates are millimeters throughout.
using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;
// One row per triangle, 0-based vertex indices.
using Faces = Eigen::Matrix<int, Eigen::Dynamic, 3>;

}  // namespace hograph
