#include "hmdchan/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hmdchan
{

namespace
{

struct AxisImage
{
    double coord;
    int low_hits;
    int high_hits;
};

std::vector<AxisImage> axis_images(double s, double length, int max_order)
{
    std::vector<AxisImage> v{{s, 0, 0}};
    if (max_order >= 1)
    {
        v.push_back({-s, 1, 0});
        v.push_back({2.0 * length - s, 0, 1});
    }
    if (max_order >= 2)
    {
        v.push_back({2.0 * length + s, 1, 1});
        v.push_back({-2.0 * length + s, 1, 1});
    }
    return v;
}

} // namespace

std::vector<Mpc> image_method_mpcs(const Scene &scene, const ImageMethodParams &params)
{
    if (params.max_order < 0 || params.max_order > 2)
        throw std::invalid_argument("image_method_mpcs: max_order must be 0, 1 or 2");
    const Vec3 &s = scene.ap_position;
    const Vec3 &r = scene.ue_base_position;
    const auto &room = scene.room_bounds;
    const double los_len = norm(r - s);
    if (!(los_len > 0.0))
        throw std::invalid_argument("image_method_mpcs: AP and UE coincide");

    const auto ix = axis_images(s.x, room[0], params.max_order);
    const auto iy = axis_images(s.y, room[1], params.max_order);
    const auto iz = axis_images(s.z, room[2], params.max_order);
    const double gamma_low[3] = {params.wall_reflection, params.wall_reflection, params.floor_reflection};
    const double gamma_high[3] = {params.wall_reflection, params.wall_reflection, params.ceiling_reflection};

    std::vector<Mpc> out;
    for (const auto &ax : ix)
        for (const auto &ay : iy)
            for (const auto &az : iz)
            {
                const AxisImage *per_axis[3] = {&ax, &ay, &az};
                int order = 0;
                double gamma = 1.0;
                for (int a = 0; a < 3; ++a)
                {
                    order += per_axis[a]->low_hits + per_axis[a]->high_hits;
                    gamma *= std::pow(gamma_low[a], per_axis[a]->low_hits) * std::pow(gamma_high[a], per_axis[a]->high_hits);
                }
                if (order > params.max_order)
                    continue;
                const Vec3 image{ax.coord, ay.coord, az.coord};
                const double len = norm(r - image);
                Vec3 prop = normalized(r - image); // propagation direction at the receiver
                Vec3 depart = prop;
                if ((ax.low_hits + ax.high_hits) % 2)
                    depart.x = -depart.x;
                if ((ay.low_hits + ay.high_hits) % 2)
                    depart.y = -depart.y;
                if ((az.low_hits + az.high_hits) % 2)
                    depart.z = -depart.z;

                Mpc m;
                const double sign = order % 2 ? -1.0 : 1.0;
                m.complex_gain = std::polar(sign * gamma * los_len / len, -2.0 * pi * (len - los_len) / carrier_wavelength);
                m.excess_delay = params.lead_delay_s + (len - los_len) / speed_of_light;
                const auto aoa = angles_from_direction(-prop);
                const auto aod = angles_from_direction(depart);
                m.aoa = {aoa[0], aoa[1]};
                m.aod = {aod[0], aod[1]};
                m.is_los = order == 0;
                m.order = order;
                out.push_back(m);
            }
    return out;
}

Scene random_scene(std::uint64_t seed, const RandomSceneOptions &options)
{
    std::mt19937_64 rng(seed ^ 0x5EED5CE4E5ULL);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto between = [&](double a, double b) { return a + (b - a) * uni(rng); };

    Scene sc;
    sc.ap_array = options.ap_array;
    const auto &room = sc.room_bounds;
    sc.ap_position = {between(0.5, room[0] - 0.5), 0.4, 2.2};
    sc.ap_array.boresight_azimuth_deg = 90.0;
    sc.ap_array.boresight_elevation_deg = -10.0;
    sc.ue_base_position = {between(0.8, room[0] - 0.8), between(2.0, room[1] - 0.8), 1.5};
    sc.ue_heading_deg = between(0.0, 360.0);

    sc.mpcs = image_method_mpcs(sc, options.image);

    const double los_len = norm(sc.ue_base_position - sc.ap_position);
    for (std::size_t k = 0; k < options.scatterers; ++k)
    {
        const Vec3 p{between(0.2, room[0] - 0.2), between(0.2, room[1] - 0.2), between(0.3, 2.7)};
        const double d1 = norm(p - sc.ap_position), d2 = norm(sc.ue_base_position - p);
        const double len = d1 + d2;
        Mpc m;
        m.complex_gain = std::polar(between(0.05, 0.25) * los_len / len, between(0.0, 2.0 * pi));
        m.excess_delay = options.image.lead_delay_s + (len - los_len) / speed_of_light;
        const auto aoa = angles_from_direction(p - sc.ue_base_position);
        const auto aod = angles_from_direction(p - sc.ap_position);
        m.aoa = {aoa[0], aoa[1]};
        m.aod = {aod[0], aod[1]};
        m.order = 1;
        sc.mpcs.push_back(m);
    }

    if (options.with_blocker)
    {
        const Vec3 to_ap = sc.ap_position - sc.ue_base_position;
        Vec3 horiz{to_ap.x, to_ap.y, 0.0};
        horiz = normalized(horiz);
        const double d = between(0.5, 1.0);
        Blocker b;
        b.center = {sc.ue_base_position.x + horiz.x * d, sc.ue_base_position.y + horiz.y * d, 0.0};
        b.radius = 0.17;
        b.height = 1.8;
        b.loss_db = 20.0;
        sc.blocker = b;
    }
    return sc;
}

} // namespace hmdchan
