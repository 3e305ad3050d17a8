#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace canefollow {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Thrown when a rotation has no well-defined yaw (pitch at +/-90 deg).
class DegenerateOrientationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Proper rotation matrix. Construction from an arbitrary matrix validates
/// orthonormality and det = +1 within 1e-9.
class Rot3 {
public:
    Rot3() : m_(Eigen::Matrix3d::Identity()) {}
    explicit Rot3(const Eigen::Matrix3d& m);

    static Rot3 identity() { return Rot3(); }
    static Rot3 rot_x(double angle);
    static Rot3 rot_y(double angle);
    static Rot3 rot_z(double angle);
    /// Nearest rotation (in Frobenius norm) to an arbitrary 3x3 matrix.
    static Rot3 project(const Eigen::Matrix3d& m);

    const Eigen::Matrix3d& matrix() const { return m_; }
    double operator()(int r, int c) const { return m_(r, c); }

    Rot3 transpose() const { return Rot3(m_.transpose(), Unchecked{}); }
    Rot3 operator*(const Rot3& o) const;
    Eigen::Vector3d operator*(const Eigen::Vector3d& v) const { return m_ * v; }

    /// Largest elementwise deviation of R^T R from identity.
    double orthonormality_error() const;
    /// Re-projects onto SO(3) when drift exceeds `tolerance`.
    Rot3 renormalized(double tolerance = 1e-6) const;

private:
    struct Unchecked {};
    Rot3(const Eigen::Matrix3d& m, Unchecked) : m_(m) {}

    Eigen::Matrix3d m_;
};

/// Rigid transform: x_parent = rot * x_child + trans.
struct Pose3 {
    Rot3 rot;
    Eigen::Vector3d trans = Eigen::Vector3d::Zero();

    static Pose3 identity() { return {}; }
    static Pose3 translation(double x, double y, double z) { return {Rot3(), Eigen::Vector3d(x, y, z)}; }
    static Pose3 planar(double x, double y, double yaw) { return {Rot3::rot_z(yaw), Eigen::Vector3d(x, y, 0.0)}; }

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rot * p + trans; }
};

Pose3 compose(const Pose3& a, const Pose3& b);
Pose3 inverse(const Pose3& p);

/// Yaw of an intrinsic Z-Y-X decomposition, in (-pi, pi].
/// Throws DegenerateOrientationError when |r(2,0)| is within 1e-9 of 1.
double yaw_of(const Rot3& r);

bool approx_equal(const Pose3& a, const Pose3& b, double tol);

}  // namespace canefollow
