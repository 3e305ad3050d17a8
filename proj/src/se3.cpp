#include "canefollow/se3.hpp"

#include <cmath>
#include <numbers>

namespace canefollow {

namespace {
constexpr double kRotationTolerance = 1e-9;
constexpr double kGimbalTolerance = 1e-9;
}  // namespace

double wrap_angle(double angle) {
    if (!std::isfinite(angle)) {
        return angle;
    }
    double wrapped = std::remainder(angle, 2.0 * std::numbers::pi);
    if (wrapped <= -std::numbers::pi) {
        wrapped += 2.0 * std::numbers::pi;
    }
    return wrapped;
}

Rot3::Rot3(const Eigen::Matrix3d& m) : m_(m) {
    if (!m.allFinite()) {
        throw std::invalid_argument("Rot3: non-finite entries");
    }
    if (orthonormality_error() > kRotationTolerance) {
        throw std::invalid_argument("Rot3: matrix is not orthonormal");
    }
    if (std::abs(m.determinant() - 1.0) > kRotationTolerance) {
        throw std::invalid_argument("Rot3: determinant is not +1");
    }
}

Rot3 Rot3::rot_x(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d m;
    m << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return Rot3(m, Unchecked{});
}

Rot3 Rot3::rot_y(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d m;
    m << c, 0, s,
         0, 1, 0,
         -s, 0, c;
    return Rot3(m, Unchecked{});
}

Rot3 Rot3::rot_z(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix3d m;
    m << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return Rot3(m, Unchecked{});
}

Rot3 Rot3::project(const Eigen::Matrix3d& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU();
    const Eigen::Matrix3d& v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0) {
        u.col(2) *= -1.0;
    }
    return Rot3(u * v.transpose(), Unchecked{});
}

Rot3 Rot3::operator*(const Rot3& o) const {
    return Rot3(m_ * o.m_, Unchecked{});
}

double Rot3::orthonormality_error() const {
    return (m_.transpose() * m_ - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

Rot3 Rot3::renormalized(double tolerance) const {
    if (orthonormality_error() <= tolerance) {
        return *this;
    }
    return project(m_);
}

Pose3 compose(const Pose3& a, const Pose3& b) {
    return {a.rot * b.rot, a.rot * b.trans + a.trans};
}

Pose3 inverse(const Pose3& p) {
    const Rot3 rt = p.rot.transpose();
    return {rt, -(rt * p.trans)};
}

double yaw_of(const Rot3& r) {
    // R = Rz(yaw) Ry(pitch) Rx(roll); r(2,0) = -sin(pitch)
    if (std::abs(std::abs(r(2, 0)) - 1.0) <= kGimbalTolerance) {
        throw DegenerateOrientationError("yaw_of: pitch at +/-90 deg, yaw undefined");
    }
    return wrap_angle(std::atan2(r(1, 0), r(0, 0)));
}

bool approx_equal(const Pose3& a, const Pose3& b, double tol) {
    return (a.rot.matrix() - b.rot.matrix()).cwiseAbs().maxCoeff() <= tol &&
           (a.trans - b.trans).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace canefollow
