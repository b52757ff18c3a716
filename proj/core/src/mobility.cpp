#include "hmdchan/mobility.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hmdchan
{

Rotation3 Orientation::matrix() const noexcept
{
    return Rotation3::about_z(deg2rad(yaw_deg)) * Rotation3::about_x(deg2rad(pitch_deg));
}

double MobilityPattern::total_duration() const noexcept
{
    return std::accumulate(segment_durations_s.begin(), segment_durations_s.end(), 0.0);
}

std::size_t MobilityPattern::snapshot_count() const noexcept
{
    return static_cast<std::size_t>(std::llround(total_duration() * snapshot_rate_hz));
}

std::size_t MobilityPattern::segment_of(double t) const noexcept
{
    if (t < segment_durations_s[0])
        return 0;
    if (t < segment_durations_s[0] + segment_durations_s[1])
        return 1;
    return 2;
}

void MobilityPattern::validate() const
{
    for (double d : segment_durations_s)
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::invalid_argument("MobilityPattern: segment durations must be positive");
    for (double d : segment_deltas_deg)
        if (!std::isfinite(d))
            throw std::invalid_argument("MobilityPattern: segment deltas must be finite");
    if (!(rotation_center_offset_m >= 0.0))
        throw std::invalid_argument("MobilityPattern: rotation centre offset must be non-negative");
    if (!(snapshot_rate_hz > 0.0))
        throw std::invalid_argument("MobilityPattern: snapshot rate must be positive");
    if (snapshot_count() == 0)
        throw std::invalid_argument("MobilityPattern: pattern yields no snapshots");
}

Orientation orientation_at(double t, const MobilityPattern &p)
{
    const double total = p.total_duration();
    if (!(t >= 0.0 && t <= total))
        throw std::invalid_argument("orientation_at: t = " + std::to_string(t) + " s outside [0, " +
                                    std::to_string(total) + "]");
    const auto &d = p.segment_durations_s;
    const auto &delta = p.segment_deltas_deg;
    const double t1 = d[0], t2 = d[0] + d[1];
    if (t <= t1)
        return {delta[0] * t / d[0], 0.0};
    if (t <= t2)
        return {delta[0], delta[1] * (t - t1) / d[1]};
    return {delta[0] + delta[2] * (t - t2) / d[2], delta[1]};
}

UePose ue_pose_at(double t, const MobilityPattern &pattern, const Vec3 &base, double heading_deg)
{
    const Orientation o = orientation_at(t, pattern);
    const Rotation3 heading = Rotation3::about_z(deg2rad(heading_deg - 270.0));
    const Rotation3 r = heading * o.matrix();
    const Vec3 arm{0.0, 0.0, pattern.rotation_center_offset_m};
    const Vec3 centre = base - arm;
    return {centre + r.apply(arm), r};
}

} // namespace hmdchan
