#pragma once

#include "hmdchan/geometry.hpp"
#include "hmdchan/mobility.hpp"
#include "hmdchan/tensor.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace hmdchan
{

// Direction as (azimuth, elevation) in degrees, world frame.
struct Angles
{
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;

    Vec3 unit() const noexcept { return direction_from_angles(azimuth_deg, elevation_deg); }
};

// One propagation path. aoa points from the receiver towards where the wave
// comes from; aod is the departure direction at the access point.
struct Mpc
{
    cplx complex_gain{1.0, 0.0};
    double excess_delay = 0.0; // seconds, relative to tap 0
    Angles aoa;
    Angles aod;
    bool is_los = false;
    int order = 0;
    std::array<double, 2> polarization_weights{1.0, 0.3};
};

// Vertical cylinder standing on center (the base centre) with the given height.
struct Blocker
{
    Vec3 center;
    double radius = 0.15;
    double height = 1.8;
    double loss_db = 20.0;

    void validate() const;
};

struct Scene
{
    std::uint32_t position_index = 0;
    Vec3 ap_position{0.5, 0.5, 2.2};
    ApArray ap_array;
    Vec3 ue_base_position{3.0, 4.5, 1.5};
    double ue_heading_deg = 270.0; // world azimuth of the looking direction at t = 0
    std::array<double, 3> room_bounds{6.0, 9.15, 3.0};
    std::vector<Mpc> mpcs;
    std::optional<Blocker> blocker;

    Scenario scenario() const noexcept { return blocker ? Scenario::NLOS : Scenario::LOS; }
    void validate(double max_delay) const;
};

// Array dimensions and tap grid used when rendering.
struct SynthSettings
{
    ArrayLayout layout;
    std::size_t n_tap = 2048;
    double tap_spacing = default_tap_spacing_s;
    double pattern_exponent = 2.0;

    // 4 elements per panel, 4x4 AP, 256 taps.
    static SynthSettings desk_scale();
    double max_delay() const noexcept { return static_cast<double>(n_tap) * tap_spacing; }
};

struct PulseTaps
{
    std::ptrdiff_t first_tap = 0;
    std::vector<double> coefficients;
};

inline constexpr int pulse_half_support = 8;

// Unit-energy Blackman-windowed sinc centred at delay / tap_spacing, covering
// taps within +-8 of the centre. Taps may fall outside the tensor; the caller
// truncates.
PulseTaps band_limited_pulse(double delay, double tap_spacing);

// Directional patch response cos^q(theta) (zero beyond 90 deg off boresight)
// times the plane-wave phase exp(-j 2 pi / lambda_c <d, p>), where d is the
// propagation direction (opposite of the AoA) and p the element position
// relative to the array reference point.
cplx element_response(const Vec3 &arrival_from, const Vec3 &position, const Vec3 &boresight,
                      double pattern_exponent = 2.0);
cplx element_response(const Mpc &mpc, const Vec3 &position, const Vec3 &boresight, double pattern_exponent = 2.0);

// Scales every path whose final leg crosses the blocker by 10^(-loss_db/20).
// The LOS leg runs from the access point to the receiver's centre of mass;
// other paths are traced from the centre of mass along their AoA up to the
// room boundary.
std::vector<Mpc> apply_blockage(const Scene &scene, const UePose &pose);

// Segment [a, b] versus a finite vertical cylinder.
bool segment_hits_cylinder(const Vec3 &a, const Vec3 &b, const Blocker &blocker) noexcept;

// Noise-free rendering of one snapshot at the given pose.
ComplexTensor3 render_paths(const Scene &scene, const std::vector<Mpc> &paths, const UePose &pose,
                            const SynthSettings &settings);

// Snapshot i of a measurement: blockage, path rendering, and i.i.d. circular
// complex Gaussian noise of the given per-sample variance. The noise stream is
// derived from (seed, position, scenario, i, rx row), so results do not depend
// on thread scheduling.
CirSnapshot synthesize_snapshot(const Scene &scene, const MobilityPattern &pattern, std::size_t i,
                                double noise_power, std::uint64_t seed, const SynthSettings &settings);

std::vector<CirSnapshot> synthesize_measurement(const Scene &scene, const MobilityPattern &pattern, double noise_power,
                                                std::uint64_t seed, const SynthSettings &settings);

// ---------------------------------------------------------------------------
// Scene construction helpers

struct ImageMethodParams
{
    // Amplitude reflection coefficients.
    double wall_reflection = 0.45;
    double floor_reflection = 0.15;
    double ceiling_reflection = 0.35;
    int max_order = 2;
    double lead_delay_s = 10.4e-9; // delay assigned to the LOS path
};

// LOS plus specular wall, floor and ceiling reflections (shoebox image
// sources up to max_order). Gains are normalised to a unit LOS amplitude.
std::vector<Mpc> image_method_mpcs(const Scene &scene, const ImageMethodParams &params = {});

struct RandomSceneOptions
{
    bool with_blocker = false;
    std::size_t scatterers = 4;
    ImageMethodParams image;
    ApArray ap_array;
};

// Random AP/UE placement in the default room with image-method paths and a
// few single-bounce scatterers. With with_blocker, a cylinder is placed on the
// LOS between 0.5 and 1.0 m in front of the receiver.
Scene random_scene(std::uint64_t seed, const RandomSceneOptions &options = {});

} // namespace hmdchan
