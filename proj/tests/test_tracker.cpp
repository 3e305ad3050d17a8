#include "canefollow/gait_sim.hpp"
#include "canefollow/tracker.hpp"

#include <doctest.h>

using namespace canefollow;

namespace {

TagDetection detection_for_leg(const RigConfig& cfg, int cam, int tag, double x, double y, double th, double t) {
    const Pose3 tag_body = compose(Pose3::planar(x, y, th), inverse(leg_in_tag_frame(cfg, tag)));
    return {cam, tag, compose(inverse(cfg.cameras[cam].extrinsic()), tag_body), t};
}

}  // namespace

TEST_SUITE("tracker") {

TEST_CASE("window holds only fused states through a long occlusion") {
    const RigConfig rig = RigConfig::defaults();
    HumanTracker tracker(rig, TrackerParams{});
    const double dt = 1.0 / 120.0;
    int k = 0;
    for (; k < 12; ++k) {
        const double t = k * dt;
        const std::vector<TagDetection> dets{detection_for_leg(rig, 0, 0, 0.35 + 0.01 * k, 0.55, 0.0, t),
                                             detection_for_leg(rig, 1, 2, 0.35, 0.35, 0.0, t)};
        const auto out = tracker.update(dets, t);
        CHECK(out.left_status == LegStatus::Detected);
    }
    const double last_left = tracker.window(Side::Left).last().timestamp;
    std::vector<LegStatus> seen;
    for (; k < 120; ++k) {
        const double t = k * dt;
        const std::vector<TagDetection> dets{detection_for_leg(rig, 1, 2, 0.35, 0.35, 0.0, t)};
        const auto out = tracker.update(dets, t);
        REQUIRE(out.left);
        seen.push_back(out.left_status);
        CHECK(out.left_status != LegStatus::Detected);
    }
    CHECK(seen.front() == LegStatus::ConditionII);
    CHECK(seen.back() == LegStatus::ConditionI);
    const LegWindow& w = tracker.window(Side::Left);
    CHECK(w.size() == 10);
    CHECK(w.last().timestamp == last_left);
    for (const auto& s : w) CHECK(s.timestamp <= last_left);
    CHECK(tracker.window(Side::Right).last().timestamp == doctest::Approx(119 * dt));
}

TEST_CASE("condition I mirrors the detected right leg") {
    const RigConfig rig = RigConfig::defaults();
    HumanTracker tracker(rig, TrackerParams{});
    const double dt = 1.0 / 120.0;
    for (int k = 0; k < 5; ++k) {
        const double t = k * dt;
        const std::vector<TagDetection> dets{detection_for_leg(rig, 0, 0, 0.35, 0.55, 0.0, t),
                                             detection_for_leg(rig, 1, 2, 0.35, 0.35, 0.0, t)};
        tracker.update(dets, t);
    }
    const double t = 0.5;
    const std::vector<TagDetection> dets{detection_for_leg(rig, 1, 2, 0.40, 0.30, 0.1, t)};
    const auto out = tracker.update(dets, t);
    REQUIRE(out.left);
    CHECK(out.left_status == LegStatus::ConditionI);
    CHECK(out.left->x == doctest::Approx(0.40).epsilon(1e-9));
    CHECK(out.left->y == doctest::Approx(0.50).epsilon(1e-9));
    REQUIRE(out.raw);
    CHECK(out.raw->left == Provenance::Estimated);
    CHECK(out.raw->right == Provenance::Detected);
}

TEST_CASE("human unavailable until both legs have history") {
    const RigConfig rig = RigConfig::defaults();
    HumanTracker tracker(rig, TrackerParams{});
    const std::vector<TagDetection> only_right{detection_for_leg(rig, 1, 2, 0.35, 0.35, 0.0, 0.0)};
    const auto out = tracker.update(only_right, 0.0);
    CHECK(out.left_status == LegStatus::Lost);
    CHECK_FALSE(out.raw);
    CHECK_FALSE(out.filtered);
}

TEST_CASE("follow controller stops when the human is lost and resumes") {
    FollowController ctl(ControllerParams{}, KinematicsParams{});
    HumanState h;
    h.x = 0.55;
    h.y = 0.45;
    const double dt = 1.0 / 120.0;
    const auto moving = ctl.step(h, dt);
    CHECK(moving.twist.vx > 0.0);
    const BodyTwist wheels_back = forward_kinematics(moving.wheels, KinematicsParams{});
    CHECK(wheels_back.vx == doctest::Approx(moving.twist.vx).epsilon(1e-12));

    double prev = moving.twist.vx;
    for (int i = 0; i < 360; ++i) {
        const auto c = ctl.step(std::nullopt, dt);
        CHECK(c.twist.vx < prev);
        CHECK(c.twist.vx > 0.0);
        prev = c.twist.vx;
    }
    CHECK(prev < moving.twist.vx * std::exp(-2.9));
    // Reacquired: no derivative kick from the stale error.
    const auto again = ctl.step(h, dt);
    CHECK(again.twist.vx <= moving.twist.vx + 0.1);
}

}
