#pragma once

#include "canefollow/se3.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace testsupport {

inline constexpr double kPi = std::numbers::pi;

inline canefollow::Rot3 random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    return canefollow::Rot3::rot_z(ang(rng)) * canefollow::Rot3::rot_y(ang(rng)) *
           canefollow::Rot3::rot_x(ang(rng));
}

inline canefollow::Pose3 random_pose(std::mt19937_64& rng, double extent = 2.0) {
    std::uniform_real_distribution<double> u(-extent, extent);
    return {random_rotation(rng), Eigen::Vector3d(u(rng), u(rng), u(rng))};
}

inline double max_abs_diff(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testsupport
