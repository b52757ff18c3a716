#pragma once

#include "hmdchan/geometry.hpp"

#include <array>
#include <cstddef>

namespace hmdchan
{

// Extrinsic xyz Euler orientation without roll: pitch about the body x-axis
// is applied first, then yaw about the vertical z-axis, R = Rz(yaw) Rx(pitch).
// Positive yaw turns left (counterclockwise seen from above), positive pitch
// tilts the looking direction towards the ground.
struct Orientation
{
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;

    Rotation3 matrix() const noexcept;
};

// Yaw, then pitch, then yaw again, each at constant angular rate.
struct MobilityPattern
{
    std::array<double, 3> segment_durations_s{3.0, 15.0, 15.0};
    std::array<double, 3> segment_deltas_deg{30.0, 30.0, 30.0}; // yaw, pitch, yaw
    double rotation_center_offset_m = 0.25;
    double snapshot_rate_hz = 1.0;

    double total_duration() const noexcept;
    std::size_t snapshot_count() const noexcept;
    double snapshot_time(std::size_t i) const noexcept { return static_cast<double>(i) / snapshot_rate_hz; }
    // Mobility segment (0, 1, 2) that snapshot time t belongs to.
    std::size_t segment_of(double t) const noexcept;
    void validate() const;
};

Orientation orientation_at(double t, const MobilityPattern &pattern);

// The receiver's centre of mass sits rotation_center_offset_m above the
// rotation centre; base is the centre-of-mass position at t = 0 and
// heading_deg the world azimuth of the looking direction at t = 0.
UePose ue_pose_at(double t, const MobilityPattern &pattern, const Vec3 &base, double heading_deg = 270.0);

} // namespace hmdchan
