#pragma once

#include "canefollow/se3.hpp"

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string_view>

#include "json.hpp"

namespace canefollow {

enum class Side { Left, Right };

constexpr Side other_side(Side s) { return s == Side::Left ? Side::Right : Side::Left; }
std::string_view to_string(Side s);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kCameraCount = 4;
inline constexpr int kTagCount = 4;

struct CameraMount {
    Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
    double yaw = 0.0;  // rad

    /// Camera frame in body frame. Camera axes: x along the optical axis, z up.
    Pose3 extrinsic() const;
};

/// Fixed geometry of the robot cameras and the leg-mounted tag attachments.
struct RigConfig {
    double leg_radius = 0.05;       // l_l
    double tag_offset = 0.04;       // l_t
    double tag_inset = 0.02;        // d_t
    std::array<CameraMount, kCameraCount> cameras{};
    std::array<Side, kTagCount> tag_side{Side::Left, Side::Left, Side::Right, Side::Right};

    /// Throws ConfigError on out-of-range parameters.
    void validate() const;

    static RigConfig defaults();
    static RigConfig from_json(const nlohmann::json& j);
    static RigConfig load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
};

/// One (camera, tag) observation. A tag that was not seen has no detection.
struct TagDetection {
    int camera_id = 0;
    int tag_id = 0;
    Pose3 pose;  // tag in camera frame
    double timestamp = 0.0;
};

/// Leg frame expressed in the frame of tag `tag_id` (triangular attachment).
/// Tags 0/2 share one mount, tags 1/3 the mirrored one.
Pose3 leg_in_tag_frame(const RigConfig& cfg, int tag_id);

/// Tag pose in the body frame as seen through the detection's camera.
Pose3 tag_to_body(const RigConfig& cfg, const TagDetection& det);

}  // namespace canefollow
