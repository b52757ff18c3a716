#include "hmdchan/geometry.hpp"
#include "hmdchan/mobility.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>

using namespace hmdchan;
using Catch::Matchers::WithinAbs;

namespace
{

std::vector<std::size_t> iota(std::size_t a, std::size_t b)
{
    std::vector<std::size_t> v(b - a);
    std::iota(v.begin(), v.end(), a);
    return v;
}

UePose identity_pose() { return {{0.0, 0.0, 0.0}, Rotation3{}}; }

// Rotating the octagon by k steps (and optionally reflecting) maps panel j to
// (k +- j) mod 8.
bool is_rigid_image(std::uint8_t a, std::uint8_t b)
{
    for (int reflect = 0; reflect < 2; ++reflect)
        for (std::size_t k = 0; k < panel_count; ++k)
        {
            std::uint8_t img = 0;
            for (std::size_t j = 0; j < panel_count; ++j)
                if ((a >> j) & 1U)
                {
                    const std::size_t to = reflect ? (k + panel_count - j) % panel_count : (k + j) % panel_count;
                    img = static_cast<std::uint8_t>(img | (1U << to));
                }
            if (img == b)
                return true;
        }
    return false;
}

} // namespace

TEST_CASE("layout defaults", "[geometry]")
{
    const ArrayLayout l;
    REQUIRE(l.n_rx() == 256);
    REQUIRE(l.rows_per_panel() == 32);
    REQUIRE(l.grid_side() == 4);
    for (std::size_t k = 0; k < panel_count; ++k)
        REQUIRE(l.panel_azimuths_deg[k] == 45.0 * static_cast<double>(k));
    REQUIRE_THAT(l.element_pitch, WithinAbs(5.357e-3, 5e-6));
    REQUIRE(ArrayLayout::desk_scale().n_rx() == 64);
    REQUIRE(ApArray{}.n_tx() == 128);
    REQUIRE(ApArray::desk_scale().n_tx() == 32);
}

TEST_CASE("rows_for_config examples", "[geometry]")
{
    const ArrayLayout l;
    REQUIRE(rows_for_config(PanelConfig::full(), l) == iota(0, 256));
    REQUIRE(rows_for_config(PanelConfig::custom({6}), l) == iota(192, 224));

    const auto f2 = rows_for_config(PanelConfig::forward(2), l);
    REQUIRE(f2.size() == 64);
    std::vector<std::size_t> want = iota(0, 32);
    for (auto r : iota(128, 160))
        want.push_back(r);
    REQUIRE(f2 == want);
    REQUIRE(std::is_sorted(f2.begin(), f2.end()));
}

TEST_CASE("rows of disjoint panel sets are disjoint and panels tile [0,256)", "[geometry]")
{
    const ArrayLayout l;
    std::set<std::size_t> all;
    for (std::size_t k = 0; k < panel_count; ++k)
        for (auto r : rows_for_config(PanelConfig::custom({k}), l))
            REQUIRE(all.insert(r).second);
    REQUIRE(all.size() == 256);
    REQUIRE(*all.rbegin() == 255);
}

TEST_CASE("rows_for_config rejects an empty set", "[geometry]")
{
    REQUIRE_THROWS_AS(PanelConfig::custom({}), std::invalid_argument);
    REQUIRE_THROWS_AS(rows_for_config(PanelConfig{}, ArrayLayout{}), std::invalid_argument);
    REQUIRE_THROWS_AS(PanelConfig::custom({8}), std::invalid_argument);
}

TEST_CASE("preset configurations", "[geometry]")
{
    for (std::size_t p = 1; p <= panel_count; ++p)
    {
        const auto f = PanelConfig::forward(p), b = PanelConfig::backward(p);
        REQUIRE(f.count() == p);
        REQUIRE(b.count() == p);
        REQUIRE(b.contains(rear_panel));
        if (p < panel_count)
            REQUIRE_FALSE(f.contains(rear_panel));
        // Backward sets are images of the forward sets under an octagon symmetry.
        REQUIRE(is_rigid_image(f.mask(), b.mask()));
    }
    REQUIRE(PanelConfig::forward(1).panels() == std::vector<std::size_t>{looking_panel});
    REQUIRE(PanelConfig::backward(1).panels() == std::vector<std::size_t>{rear_panel});
    REQUIRE(PanelConfig::forward(1).bitstring() == "00000010");
    REQUIRE(PanelConfig::forward(2).bitstring() == "10001000");
    REQUIRE(PanelConfig::forward(3).bitstring() == "01010010");
    REQUIRE(PanelConfig::forward(4).bitstring() == "01010101");
    REQUIRE(PanelConfig::forward(8).mask() == 0xFF);
    REQUIRE(PanelConfig::backward(8).mask() == 0xFF);
    REQUIRE_THROWS_AS(PanelConfig::forward(0), std::invalid_argument);
    REQUIRE_THROWS_AS(PanelConfig::backward(9), std::invalid_argument);
}

TEST_CASE("nested chains", "[geometry]")
{
    // Forward 4 to 8 panels nest.
    for (std::size_t p = 4; p < panel_count; ++p)
        REQUIRE(PanelConfig::forward(p).is_subset_of(PanelConfig::forward(p + 1)));
    // 1, 2, 4, 8 chain used for the boundedness checks.
    const PanelConfig chain[] = {PanelConfig::custom({6}), PanelConfig::backward(2), PanelConfig::backward(4),
                                 PanelConfig::full()};
    for (int j = 0; j < 3; ++j)
        REQUIRE(chain[j].is_subset_of(chain[j + 1]));
}

TEST_CASE("config parsing and labels", "[geometry]")
{
    REQUIRE(PanelConfig::parse("F3") == PanelConfig::forward(3));
    REQUIRE(PanelConfig::parse("B2") == PanelConfig::backward(2));
    REQUIRE(PanelConfig::parse("00000010") == PanelConfig::forward(1));
    REQUIRE(PanelConfig::parse("VII") == PanelConfig::custom({6}));
    REQUIRE(PanelConfig::parse("I, V").mask() == PanelConfig::forward(2).mask());
    REQUIRE(PanelConfig::parse("C-11000000").panels() == std::vector<std::size_t>{0, 1});
    REQUIRE(PanelConfig::custom({0, 1}).label() == "C-11000000");
    REQUIRE(PanelConfig::backward(5).label() == "B5");
    REQUIRE_THROWS_AS(PanelConfig::parse("F9"), std::invalid_argument);
    REQUIRE_THROWS_AS(PanelConfig::parse("IX"), std::invalid_argument);
    REQUIRE_THROWS_AS(PanelConfig::parse("00000000"), std::invalid_argument);
    for (std::size_t k = 0; k < panel_count; ++k)
        REQUIRE(panel_from_roman(panel_roman(k)) == k);
}

TEST_CASE("orientation endpoints", "[geometry]")
{
    const MobilityPattern p;
    REQUIRE(p.total_duration() == 33.0);
    REQUIRE(p.snapshot_count() == 33);
    auto o = orientation_at(0.0, p);
    REQUIRE((o.yaw_deg == 0.0 && o.pitch_deg == 0.0));
    o = orientation_at(3.0, p);
    REQUIRE((o.yaw_deg == 30.0 && o.pitch_deg == 0.0));
    o = orientation_at(18.0, p);
    REQUIRE((o.yaw_deg == 30.0 && o.pitch_deg == 30.0));
    o = orientation_at(33.0, p);
    REQUIRE((o.yaw_deg == 60.0 && o.pitch_deg == 30.0));
    o = orientation_at(10.5, p);
    REQUIRE_THAT(o.pitch_deg, WithinAbs(15.0, 1e-12));
    REQUIRE_THROWS_AS(orientation_at(-0.1, p), std::invalid_argument);
    REQUIRE_THROWS_AS(orientation_at(33.01, p), std::invalid_argument);
}

TEST_CASE("orientation is continuous and rotations are orthonormal", "[geometry]")
{
    const MobilityPattern p;
    Orientation prev = orientation_at(0.0, p);
    for (int ms = 1; ms <= 33000; ++ms)
    {
        const Orientation o = orientation_at(ms * 1e-3, p);
        REQUIRE(std::abs(o.yaw_deg - prev.yaw_deg) <= 0.02);
        REQUIRE(std::abs(o.pitch_deg - prev.pitch_deg) <= 0.02);
        if (ms % 250 == 0)
            REQUIRE(o.matrix().orthonormality_error() <= 1e-12);
        prev = o;
    }
}

TEST_CASE("pose: positive yaw turns left, positive pitch looks down", "[geometry]")
{
    const ArrayLayout l;
    const Vec3 look{0.0, -1.0, 0.0};
    const Rotation3 yaw = Orientation{90.0, 0.0}.matrix();
    const Vec3 turned = yaw.apply(look);
    // Facing -y, a left turn looks along +x.
    REQUIRE_THAT(turned.x, WithinAbs(1.0, 1e-12));
    const Vec3 down = Orientation{0.0, 30.0}.matrix().apply(look);
    REQUIRE(down.z < 0.0);
    REQUIRE_THAT(l.looking_azimuth_deg(), WithinAbs(270.0, 0.0));
}

TEST_CASE("pose displacements across segments", "[geometry]")
{
    const MobilityPattern p;
    const Vec3 base{3.0, 4.0, 1.5};
    REQUIRE(norm(ue_pose_at(0.0, p, base).center_of_mass - base) == 0.0);
    const double d23 = norm(ue_pose_at(18.0, p, base).center_of_mass - ue_pose_at(3.0, p, base).center_of_mass);
    const double d33 = norm(ue_pose_at(33.0, p, base).center_of_mass - ue_pose_at(18.0, p, base).center_of_mass);
    REQUIRE_THAT(d23, WithinAbs(2 * 0.25 * std::sin(deg2rad(15.0)), 1e-12));
    REQUIRE_THAT(d23, WithinAbs(0.129, 0.005));
    REQUIRE_THAT(d33, WithinAbs(0.065, 0.005));
    // The yaw-only first segment keeps the centre of mass on the rotation axis.
    REQUIRE(norm(ue_pose_at(3.0, p, base).center_of_mass - base) < 1e-12);
}

TEST_CASE("element placement and boresights", "[geometry]")
{
    const ArrayLayout l;
    const UePose id = identity_pose();
    for (std::size_t r = 192; r < 224; ++r)
    {
        const auto e = element_position_and_boresight(r, l, id);
        REQUIRE_THAT(e.boresight.x, WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(e.boresight.y, WithinAbs(-1.0, 1e-12));
    }
    // Dual-pol rows share a position.
    for (std::size_t r = 0; r < 256; r += 2)
    {
        const auto a = element_position_and_boresight(r, l, id), b = element_position_and_boresight(r + 1, l, id);
        REQUIRE(a.position == b.position);
    }
    // Yawed pose rotates every boresight by 45 degrees about z.
    const UePose yawed{{0, 0, 0}, Orientation{45.0, 0.0}.matrix()};
    for (std::size_t r = 0; r < 256; ++r)
    {
        const auto a = element_position_and_boresight(r, l, id), b = element_position_and_boresight(r, l, yawed);
        REQUIRE_THAT(dot(a.boresight, b.boresight), WithinAbs(std::cos(deg2rad(45.0)), 1e-12));
        REQUIRE_THAT(cross(a.boresight, b.boresight).z, WithinAbs(std::sin(deg2rad(45.0)), 1e-12));
    }
    // Neighbouring elements on a panel are half a wavelength apart and lie in
    // the panel plane.
    const auto e0 = element_position_and_boresight(0, l, id), e1 = element_position_and_boresight(2, l, id);
    REQUIRE_THAT(norm(e1.position - e0.position), WithinAbs(l.element_pitch, 1e-15));
    REQUIRE_THAT(dot(e1.position - e0.position, e0.boresight), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(dot(e0.position, e0.boresight), WithinAbs(l.panel_radius, 1e-15));
    REQUIRE_THROWS_AS(element_position_and_boresight(256, l, id), std::invalid_argument);
}
