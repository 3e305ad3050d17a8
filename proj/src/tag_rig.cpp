#include "canefollow/tag_rig.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

namespace canefollow {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Side parse_side(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    throw ConfigError("tag_map: expected \"left\" or \"right\", got \"" + s + "\"");
}

}  // namespace

std::string_view to_string(Side s) {
    return s == Side::Left ? "left" : "right";
}

Pose3 CameraMount::extrinsic() const {
    return {Rot3::rot_z(yaw), xyz};
}

void RigConfig::validate() const {
    if (!(leg_radius > 0.0)) throw ConfigError("l_l must be > 0");
    if (!(tag_offset > 0.0)) throw ConfigError("l_t must be > 0");
    if (!(tag_inset >= 0.0)) throw ConfigError("d_t must be >= 0");
    for (const auto& cam : cameras) {
        if (!cam.xyz.allFinite() || !std::isfinite(cam.yaw)) {
            throw ConfigError("camera extrinsic is not finite");
        }
    }
    bool has_left = false;
    bool has_right = false;
    for (Side s : tag_side) {
        has_left |= s == Side::Left;
        has_right |= s == Side::Right;
    }
    if (!has_left || !has_right) {
        throw ConfigError("tag_map must assign tags to both legs");
    }
}

RigConfig RigConfig::defaults() {
    RigConfig cfg;
    // Forward arc biased toward the user's side (+y); 0.10 m about the body origin.
    constexpr std::array<double, kCameraCount> yaw_deg{90.0, 60.0, 30.0, 0.0};
    for (int i = 0; i < kCameraCount; ++i) {
        const double yaw = yaw_deg[i] * kDeg;
        cfg.cameras[i].yaw = yaw;
        cfg.cameras[i].xyz = Eigen::Vector3d(0.10 * std::cos(yaw), 0.10 * std::sin(yaw), 0.0);
    }
    return cfg;
}

RigConfig RigConfig::from_json(const nlohmann::json& j) {
    RigConfig cfg = defaults();
    try {
        cfg.leg_radius = j.value("l_l", cfg.leg_radius);
        cfg.tag_offset = j.value("l_t", cfg.tag_offset);
        cfg.tag_inset = j.value("d_t", cfg.tag_inset);
        if (j.contains("cameras")) {
            const auto& cams = j.at("cameras");
            if (!cams.is_array() || cams.size() != kCameraCount) {
                throw ConfigError("cameras: expected exactly 4 entries");
            }
            std::array<bool, kCameraCount> seen{};
            for (const auto& c : cams) {
                const int id = c.at("id").get<int>();
                if (id < 0 || id >= kCameraCount || seen[id]) {
                    throw ConfigError("cameras: ids must be a permutation of 0..3");
                }
                seen[id] = true;
                const auto xyz = c.at("xyz").get<std::array<double, 3>>();
                cfg.cameras[id].xyz = Eigen::Vector3d(xyz[0], xyz[1], xyz[2]);
                cfg.cameras[id].yaw = c.at("yaw_deg").get<double>() * kDeg;
            }
        }
        if (j.contains("tag_map")) {
            const auto& tm = j.at("tag_map");
            if (!tm.is_object() || tm.size() != kTagCount) {
                throw ConfigError("tag_map: expected exactly 4 entries");
            }
            for (int t = 0; t < kTagCount; ++t) {
                const std::string key = std::to_string(t);
                if (!tm.contains(key)) {
                    throw ConfigError("tag_map: missing tag " + key);
                }
                cfg.tag_side[t] = parse_side(tm.at(key).get<std::string>());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("rig config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RigConfig RigConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open rig config: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("rig config " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json RigConfig::to_json() const {
    nlohmann::json j;
    j["l_l"] = leg_radius;
    j["l_t"] = tag_offset;
    j["d_t"] = tag_inset;
    j["cameras"] = nlohmann::json::array();
    for (int i = 0; i < kCameraCount; ++i) {
        const auto& c = cameras[i];
        j["cameras"].push_back({{"id", i},
                                {"xyz", {c.xyz.x(), c.xyz.y(), c.xyz.z()}},
                                {"yaw_deg", c.yaw / kDeg}});
    }
    for (int t = 0; t < kTagCount; ++t) {
        j["tag_map"][std::to_string(t)] = std::string(to_string(tag_side[t]));
    }
    return j;
}

Pose3 leg_in_tag_frame(const RigConfig& cfg, int tag_id) {
    if (tag_id < 0 || tag_id >= kTagCount) {
        throw ConfigError("unknown tag id " + std::to_string(tag_id));
    }
    // 30 deg attachment; exact sqrt(3)/2 keeps the block orthonormal.
    const double c = std::sqrt(3.0) / 2.0;
    const double reach = cfg.leg_radius + cfg.tag_offset;
    // Tags 0 and 2 sit on one face of the attachment, 1 and 3 on the mirror face.
    const double sign = (tag_id % 2 == 0) ? 1.0 : -1.0;
    Eigen::Matrix3d r;
    r << c, -sign * 0.5, 0.0,
         0.0, 0.0, -1.0,
         sign * 0.5, c, 0.0;
    const Eigen::Vector3d t(sign * (0.5 * reach - cfg.tag_inset), 0.0, c * reach);
    return {Rot3(r), t};
}

Pose3 tag_to_body(const RigConfig& cfg, const TagDetection& det) {
    if (det.camera_id < 0 || det.camera_id >= kCameraCount) {
        throw ConfigError("camera id out of range: " + std::to_string(det.camera_id));
    }
    return compose(cfg.cameras[det.camera_id].extrinsic(), det.pose);
}

}  // namespace canefollow
