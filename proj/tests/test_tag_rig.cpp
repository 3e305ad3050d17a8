#include "canefollow/tag_rig.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace canefollow;
using testsupport::kPi;

namespace {

// Attachment matrices with the rounded 0.866 entries.
Eigen::Matrix4d printed_mount(const RigConfig& cfg, double sign) {
    const double reach = cfg.leg_radius + cfg.tag_offset;
    Eigen::Matrix4d m;
    m << 0.866, -sign * 0.5, 0, sign * (0.5 * reach - cfg.tag_inset),
         0, 0, -1, 0,
         sign * 0.5, 0.866, 0, 0.866 * reach,
         0, 0, 0, 1;
    return m;
}

}  // namespace

TEST_SUITE("tag_rig") {

TEST_CASE("leg_in_tag_frame matches the attachment matrix") {
    const RigConfig cfg = RigConfig::defaults();
    const Pose3 t0 = leg_in_tag_frame(cfg, 0);
    CHECK(t0.trans.x() == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(t0.trans.y() == 0.0);
    CHECK(t0.trans.z() == doctest::Approx(std::sqrt(3.0) / 2.0 * 0.09).epsilon(1e-12));
    CHECK(t0.trans.z() == doctest::Approx(0.0779).epsilon(1e-3));

    const Eigen::Matrix4d printed = printed_mount(cfg, 1.0);
    CHECK(testsupport::max_abs_diff(t0.rot.matrix(), printed.topLeftCorner<3, 3>()) < 1e-3);
    CHECK((t0.trans - printed.topRightCorner<3, 1>()).cwiseAbs().maxCoeff() < 1e-4);

    const Pose3 t1 = leg_in_tag_frame(cfg, 1);
    const Eigen::Matrix4d printed1 = printed_mount(cfg, -1.0);
    CHECK(testsupport::max_abs_diff(t1.rot.matrix(), printed1.topLeftCorner<3, 3>()) < 1e-3);
    CHECK((t1.trans - printed1.topRightCorner<3, 1>()).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("tags 0/2 and 1/3 share mounts") {
    const RigConfig cfg = RigConfig::defaults();
    CHECK(approx_equal(leg_in_tag_frame(cfg, 0), leg_in_tag_frame(cfg, 2), 0.0));
    CHECK(approx_equal(leg_in_tag_frame(cfg, 1), leg_in_tag_frame(cfg, 3), 0.0));
    CHECK_FALSE(approx_equal(leg_in_tag_frame(cfg, 0), leg_in_tag_frame(cfg, 1), 1e-3));
}

TEST_CASE("mirror mounts differ only in the sign pattern") {
    const RigConfig cfg = RigConfig::defaults();
    const Pose3 a = leg_in_tag_frame(cfg, 0);
    const Pose3 b = leg_in_tag_frame(cfg, 1);
    Eigen::Matrix3d flip = Eigen::Matrix3d::Ones();
    flip(0, 1) = -1.0;
    flip(2, 0) = -1.0;
    CHECK(testsupport::max_abs_diff(a.rot.matrix().cwiseProduct(flip), b.rot.matrix()) == 0.0);
    CHECK(a.trans.x() == -b.trans.x());
    CHECK(a.trans.z() == b.trans.z());
}

TEST_CASE("printed matrices are near-rotations, exact ones are rotations") {
    const RigConfig cfg = RigConfig::defaults();
    for (double sign : {1.0, -1.0}) {
        const Eigen::Matrix3d r = printed_mount(cfg, sign).topLeftCorner<3, 3>();
        const double err = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
        CHECK(err < 1e-3);
        // Too loose for the 1e-9 rotation invariant.
        CHECK(err > 1e-9);
        CHECK_THROWS_AS(Rot3{r}, std::invalid_argument);
    }
    for (int tag = 0; tag < kTagCount; ++tag) {
        const Pose3 p = leg_in_tag_frame(cfg, tag);
        CHECK(p.rot.orthonormality_error() < 1e-12);
        CHECK(approx_equal(compose(p, inverse(p)), Pose3::identity(), 1e-12));
    }
}

TEST_CASE("leg axis sits behind the tag, pointing up") {
    // The leg z axis in tag coordinates is the third column; it must be -y_tag
    // (tag images have y pointing down).
    const RigConfig cfg = RigConfig::defaults();
    for (int tag = 0; tag < kTagCount; ++tag) {
        const Eigen::Vector3d leg_z = leg_in_tag_frame(cfg, tag).rot.matrix().col(2);
        CHECK((leg_z - Eigen::Vector3d(0, -1, 0)).norm() < 1e-12);
        CHECK(leg_in_tag_frame(cfg, tag).trans.z() > 0.0);
    }
}

TEST_CASE("unknown tag id is a configuration error") {
    const RigConfig cfg = RigConfig::defaults();
    CHECK_THROWS_AS(leg_in_tag_frame(cfg, 4), ConfigError);
    CHECK_THROWS_AS(leg_in_tag_frame(cfg, -1), ConfigError);
}

TEST_CASE("tag_to_body") {
    RigConfig cfg = RigConfig::defaults();
    std::mt19937_64 rng(9);
    const Pose3 p = testsupport::random_pose(rng, 1.0);

    cfg.cameras[2] = {};
    CHECK(approx_equal(tag_to_body(cfg, {2, 0, p, 0.0}), p, 1e-15));
    CHECK(approx_equal(tag_to_body(cfg, {1, 0, Pose3::identity(), 0.0}), cfg.cameras[1].extrinsic(), 0.0));

    cfg.cameras[0] = {Eigen::Vector3d(0.1, 0.0, 0.0), kPi};
    const Pose3 body = tag_to_body(cfg, {0, 3, Pose3::translation(0.5, 0.0, 0.0), 0.0});
    CHECK(body.trans.x() == doctest::Approx(-0.4).epsilon(1e-12));
    CHECK(std::abs(body.trans.y()) < 1e-12);
    CHECK(body.trans.z() == 0.0);

    CHECK_THROWS_AS(tag_to_body(cfg, {4, 0, p, 0.0}), ConfigError);
}

TEST_CASE("rig config validation and JSON") {
    RigConfig cfg = RigConfig::defaults();
    CHECK_NOTHROW(cfg.validate());
    cfg.leg_radius = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);

    const RigConfig round = RigConfig::from_json(RigConfig::defaults().to_json());
    for (int i = 0; i < kCameraCount; ++i) {
        CHECK(approx_equal(round.cameras[i].extrinsic(), RigConfig::defaults().cameras[i].extrinsic(), 1e-12));
    }

    nlohmann::json j = {{"l_l", 0.06},
                        {"l_t", 0.03},
                        {"d_t", 0.01},
                        {"cameras",
                         {{{"id", 0}, {"xyz", {0.1, 0.0, 0.2}}, {"yaw_deg", 45}},
                          {{"id", 1}, {"xyz", {0.1, 0.05, 0.2}}, {"yaw_deg", 15}},
                          {{"id", 2}, {"xyz", {0.1, -0.05, 0.2}}, {"yaw_deg", -15}},
                          {{"id", 3}, {"xyz", {0.1, -0.1, 0.2}}, {"yaw_deg", -45}}}},
                        {"tag_map", {{"0", "right"}, {"1", "right"}, {"2", "left"}, {"3", "left"}}}};
    const RigConfig custom = RigConfig::from_json(j);
    CHECK(custom.leg_radius == 0.06);
    CHECK(custom.cameras[3].yaw == doctest::Approx(-kPi / 4.0));
    CHECK(custom.tag_side[0] == Side::Right);
    CHECK(custom.tag_side[3] == Side::Left);

    nlohmann::json bad = j;
    bad["cameras"].erase(0);
    CHECK_THROWS_AS(RigConfig::from_json(bad), ConfigError);
    bad = j;
    bad["cameras"][1]["id"] = 0;
    CHECK_THROWS_AS(RigConfig::from_json(bad), ConfigError);
    bad = j;
    bad["tag_map"]["1"] = "middle";
    CHECK_THROWS_AS(RigConfig::from_json(bad), ConfigError);
    bad = j;
    bad["tag_map"] = {{"0", "left"}, {"1", "left"}, {"2", "left"}, {"3", "left"}};
    CHECK_THROWS_AS(RigConfig::from_json(bad), ConfigError);
    bad = j;
    bad["d_t"] = -0.1;
    CHECK_THROWS_AS(RigConfig::from_json(bad), ConfigError);
}

TEST_CASE("rig config file loading") {
    const auto dir = std::filesystem::temp_directory_path() / "canefollow_rig_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "rig.json") << RigConfig::defaults().to_json().dump();
        std::ofstream(dir / "broken.json") << "{ not json";
    }
    CHECK_NOTHROW(RigConfig::load(dir / "rig.json"));
    CHECK_THROWS_AS(RigConfig::load(dir / "broken.json"), ConfigError);
    CHECK_THROWS_AS(RigConfig::load(dir / "missing.json"), ConfigError);
    std::filesystem::remove_all(dir);
}

}
