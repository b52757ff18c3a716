#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hmdchan
{

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0;
inline constexpr double carrier_frequency_hz = 28e9;
inline constexpr double carrier_wavelength = speed_of_light / carrier_frequency_hz;

inline constexpr double deg2rad(double d) noexcept { return d * pi / 180.0; }
inline constexpr double rad2deg(double r) noexcept { return r * 180.0 / pi; }

struct Vec3
{
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 &operator+=(const Vec3 &o) noexcept { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3 &operator-=(const Vec3 &o) noexcept { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3 &operator*=(double s) noexcept { x *= s; y *= s; z *= s; return *this; }
    friend Vec3 operator+(Vec3 a, const Vec3 &b) noexcept { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3 &b) noexcept { return a -= b; }
    friend Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
    friend Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
    friend Vec3 operator-(const Vec3 &a) noexcept { return {-a.x, -a.y, -a.z}; }
    friend bool operator==(const Vec3 &, const Vec3 &) = default;
};

inline double dot(const Vec3 &a, const Vec3 &b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3 &a, const Vec3 &b) noexcept
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3 &a) noexcept { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3 &a) { return a * (1.0 / norm(a)); }

// Unit vector for azimuth (from +x towards +y) and elevation (above the xy-plane), degrees.
Vec3 direction_from_angles(double azimuth_deg, double elevation_deg) noexcept;
// Inverse of direction_from_angles; returns {azimuth, elevation} in degrees.
std::array<double, 2> angles_from_direction(const Vec3 &d) noexcept;

// Proper rotation matrix, row-major.
struct Rotation3
{
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Rotation3 about_x(double rad) noexcept;
    static Rotation3 about_y(double rad) noexcept;
    static Rotation3 about_z(double rad) noexcept;

    Vec3 apply(const Vec3 &v) const noexcept
    {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    Rotation3 transposed() const noexcept;
    friend Rotation3 operator*(const Rotation3 &a, const Rotation3 &b) noexcept;

    // max |R^T R - I| entry
    double orthonormality_error() const noexcept;
};

inline constexpr std::size_t panel_count = 8;
// Panel VII (index 6) faces the looking direction; panel III (index 2) faces backwards.
inline constexpr std::size_t looking_panel = 6;
inline constexpr std::size_t rear_panel = 2;

std::string_view panel_roman(std::size_t panel);
std::optional<std::size_t> panel_from_roman(std::string_view roman);

// Octagonal receiver: 8 square panels of dual-polarized patches. Panel k has
// its outward normal at azimuth k*45 deg in the body frame, so the looking
// direction (panel VII) is -y and the body x-axis points to the wearer's left.
struct ArrayLayout
{
    std::array<double, panel_count> panel_azimuths_deg{0, 45, 90, 135, 180, 225, 270, 315};
    std::size_t elements_per_panel = 16;
    std::size_t polarizations = 2;
    double element_pitch = carrier_wavelength / 2.0;
    double panel_radius = 0.05;

    static ArrayLayout full_scale() { return {}; }
    // 2x2 elements per panel for fast runs.
    static ArrayLayout desk_scale();

    std::size_t grid_side() const noexcept;
    std::size_t rows_per_panel() const noexcept { return elements_per_panel * polarizations; }
    std::size_t n_rx() const noexcept { return panel_count * rows_per_panel(); }
    double looking_azimuth_deg() const noexcept { return panel_azimuths_deg[looking_panel]; }

    void validate() const;
};

enum class Facing : std::uint8_t
{
    Forward,
    Backward,
    Custom,
};

// Subset of the eight panels. Bit k of the mask selects panel k (I = bit 0).
class PanelConfig
{
public:
    PanelConfig() = default;

    // Preset configurations for p = 1..8 panels.
    static PanelConfig forward(std::size_t p);
    static PanelConfig backward(std::size_t p);
    static PanelConfig custom(const std::vector<std::size_t> &panels);
    static PanelConfig from_mask(std::uint8_t mask, Facing facing = Facing::Custom);
    static PanelConfig full() { return forward(8); }

    // Accepts "F3", "B2", an 8-character bit string whose k-th character is
    // panel k ("00000010" is panel VII), or a comma list of roman numerals.
    static PanelConfig parse(std::string_view text);

    std::uint8_t mask() const noexcept { return mask_; }
    Facing facing() const noexcept { return facing_; }
    std::size_t count() const noexcept;
    bool contains(std::size_t panel) const noexcept { return panel < panel_count && ((mask_ >> panel) & 1U); }
    std::vector<std::size_t> panels() const;
    bool is_subset_of(const PanelConfig &other) const noexcept { return (mask_ & ~other.mask_) == 0; }

    std::string bitstring() const;
    // "F3", "B2" for presets, "C-01010010" otherwise.
    std::string label() const;

    friend bool operator==(const PanelConfig &, const PanelConfig &) = default;

private:
    PanelConfig(std::uint8_t mask, Facing facing) : mask_(mask), facing_(facing) {}
    std::uint8_t mask_ = 0;
    Facing facing_ = Facing::Custom;
};

// Receive-row index r = panel * rows_per_panel + element * polarizations + polarization,
// sorted ascending.
std::vector<std::size_t> rows_for_config(const PanelConfig &config, const ArrayLayout &layout);

struct Orientation;

// Body-to-world rigid transform of the receiver.
struct UePose
{
    Vec3 center_of_mass;
    Rotation3 rotation;
};

struct ElementPlacement
{
    Vec3 position;
    Vec3 boresight;
};

ElementPlacement element_position_and_boresight(std::size_t row, const ArrayLayout &layout, const UePose &pose);

// Transmit planar array: rows x cols elements, dual-polarized, boresight given by
// azimuth and elevation; column index t = element * polarizations + polarization,
// element = row * cols + col.
struct ApArray
{
    std::size_t rows = 4;
    std::size_t cols = 16;
    std::size_t polarizations = 2;
    double element_pitch = carrier_wavelength / 2.0;
    double boresight_azimuth_deg = 0.0;
    double boresight_elevation_deg = 0.0;

    static ApArray desk_scale();

    std::size_t n_tx() const noexcept { return rows * cols * polarizations; }
    Vec3 boresight() const noexcept { return direction_from_angles(boresight_azimuth_deg, boresight_elevation_deg); }
    // Element position relative to the array centre.
    Vec3 element_offset(std::size_t column) const;
    void validate() const;
};

} // namespace hmdchan
