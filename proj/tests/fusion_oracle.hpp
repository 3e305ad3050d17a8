#pragma once

// Independent fusion reference: plain 4x4 homogeneous matrices, the attachment
// matrix rebuilt from its printed form, and explicit sin/cos averaging.

#include "canefollow/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline Eigen::Matrix4d homogeneous(const canefollow::Pose3& p) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Identity();
    h.topLeftCorner<3, 3>() = p.rot.matrix();
    h.topRightCorner<3, 1>() = p.trans;
    return h;
}

inline Eigen::Matrix4d camera_matrix(const canefollow::CameraMount& cam) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Identity();
    h.topLeftCorner<3, 3>() = Eigen::AngleAxisd(cam.yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    h.topRightCorner<3, 1>() = cam.xyz;
    return h;
}

inline Eigen::Matrix4d mount_matrix(const canefollow::RigConfig& cfg, int tag) {
    const double c = std::sqrt(0.75);
    const double s = tag % 2 == 0 ? 1.0 : -1.0;
    const double reach = cfg.leg_radius + cfg.tag_offset;
    Eigen::Matrix4d m;
    m << c, -0.5 * s, 0, s * (0.5 * reach - cfg.tag_inset),
         0, 0, -1, 0,
         0.5 * s, c, 0, c * reach,
         0, 0, 0, 1;
    return m;
}

struct Mean {
    double x;
    double y;
    double theta;
};

inline std::optional<Mean> fuse(const canefollow::RigConfig& cfg, const canefollow::GateRegion& g,
                                 const std::vector<canefollow::TagDetection>& dets, canefollow::Side side) {
    // Latest per pair; equal timestamps are never generated by the tests that use this.
    std::map<std::pair<int, int>, canefollow::TagDetection> latest;
    for (const auto& d : dets) {
        if (cfg.tag_side[d.tag_id] != side) continue;
        auto key = std::make_pair(d.camera_id, d.tag_id);
        auto it = latest.find(key);
        if (it == latest.end() || d.timestamp > it->second.timestamp) latest[key] = d;
    }
    double sx = 0.0, sy = 0.0, ss = 0.0, sc = 0.0;
    int n = 0;
    for (const auto& [key, d] : latest) {
        const Eigen::Matrix4d tag_body = camera_matrix(cfg.cameras[d.camera_id]) * homogeneous(d.pose);
        const double tx = tag_body(0, 3);
        const double ty = tag_body(1, 3);
        if (tx < g.x_min || tx > g.x_max || ty < g.y_min || ty > g.y_max) continue;
        const Eigen::Matrix4d leg = tag_body * mount_matrix(cfg, d.tag_id);
        const double th = std::atan2(leg(1, 0), leg(0, 0));
        sx += leg(0, 3);
        sy += leg(1, 3);
        ss += std::sin(th);
        sc += std::cos(th);
        ++n;
    }
    if (n == 0) return std::nullopt;
    return Mean{sx / n, sy / n, std::atan2(ss, sc)};
}

/// Random detections of unique (camera, tag) pairs whose implied tag positions
/// straddle the default gate, with small out-of-plane tilt.
inline std::vector<canefollow::TagDetection> random_detections(const canefollow::RigConfig& cfg,
                                                               std::mt19937_64& rng, int max_pairs = 8) {
    using namespace canefollow;
    std::uniform_int_distribution<int> count(0, max_pairs);
    std::uniform_real_distribution<double> px(-0.8, 1.8);
    std::uniform_real_distribution<double> py(-1.3, 1.3);
    std::uniform_real_distribution<double> yaw(-3.14159, 3.14159);
    std::uniform_real_distribution<double> tilt(-0.1, 0.1);
    std::uniform_real_distribution<double> stamp(0.0, 1.0);

    std::vector<int> slots(kCameraCount * kTagCount);
    for (int i = 0; i < static_cast<int>(slots.size()); ++i) slots[i] = i;
    std::shuffle(slots.begin(), slots.end(), rng);

    std::vector<TagDetection> out;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
        const int cam = slots[i] / kTagCount;
        const int tag = slots[i] % kTagCount;
        const Pose3 leg{Rot3::rot_z(yaw(rng)) * Rot3::rot_x(tilt(rng)) * Rot3::rot_y(tilt(rng)),
                        Eigen::Vector3d(px(rng), py(rng), tilt(rng))};
        const Pose3 tag_body = compose(leg, inverse(leg_in_tag_frame(cfg, tag)));
        out.push_back({cam, tag, compose(inverse(cfg.cameras[cam].extrinsic()), tag_body), stamp(rng)});
    }
    return out;
}

}  // namespace oracle
