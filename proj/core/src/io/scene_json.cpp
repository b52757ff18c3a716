#include "hmdchan/io/scene_json.hpp"

#include "json_util.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hmdchan::io
{

using nlohmann::json;
using namespace json_util;

namespace
{

Angles angles(const json &j, const std::string &where)
{
    if (j.is_array())
    {
        if (j.size() != 2)
            fail(where, "expected [azimuth_deg, elevation_deg]");
        return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
    }
    only_keys(j, where, {"azimuth_deg", "elevation_deg"});
    return {get_or(j, "azimuth_deg", where, 0.0), get_or(j, "elevation_deg", where, 0.0)};
}

Mpc parse_mpc(const json &j, const std::string &where)
{
    only_keys(j, where, {"gain", "gain_db", "phase_deg", "delay_ns", "delay_s", "aoa", "aod", "los", "order",
                         "polarization_weights"});
    Mpc m;
    if (j.contains("gain"))
    {
        if (j.contains("gain_db") || j.contains("phase_deg"))
            fail(where, "give either 'gain' or 'gain_db'/'phase_deg'");
        const json &g = j.at("gain");
        if (g.is_number())
            m.complex_gain = {g.get<double>(), 0.0};
        else if (g.is_array() && g.size() == 2)
            m.complex_gain = {number(g[0], where + ".gain[0]"), number(g[1], where + ".gain[1]")};
        else
            fail(where + ".gain", "expected a number or [re, im]");
    }
    else
    {
        const double db = get_or(j, "gain_db", where, 0.0);
        const double ph = get_or(j, "phase_deg", where, 0.0);
        m.complex_gain = std::polar(std::pow(10.0, db / 20.0), deg2rad(ph));
    }
    if (j.contains("delay_ns") == j.contains("delay_s"))
        fail(where, "give exactly one of 'delay_ns' or 'delay_s'");
    m.excess_delay = j.contains("delay_s") ? get_or(j, "delay_s", where, 0.0) : get_or(j, "delay_ns", where, 0.0) * 1e-9;
    if (j.contains("aoa"))
        m.aoa = angles(j.at("aoa"), where + ".aoa");
    if (j.contains("aod"))
        m.aod = angles(j.at("aod"), where + ".aod");
    m.is_los = get_or(j, "los", where, false);
    m.order = get_or(j, "order", where, m.is_los ? 0 : 1);
    if (j.contains("polarization_weights"))
    {
        const json &w = j.at("polarization_weights");
        if (!w.is_array() || w.size() != 2)
            fail(where + ".polarization_weights", "expected two numbers");
        m.polarization_weights = {number(w[0], where + ".polarization_weights[0]"),
                                  number(w[1], where + ".polarization_weights[1]")};
    }
    return m;
}

ImageMethodParams parse_image(const json &j, const std::string &where)
{
    only_keys(j, where, {"wall_reflection", "floor_reflection", "ceiling_reflection", "max_order", "lead_delay_ns"});
    ImageMethodParams p;
    p.wall_reflection = get_or(j, "wall_reflection", where, p.wall_reflection);
    p.floor_reflection = get_or(j, "floor_reflection", where, p.floor_reflection);
    p.ceiling_reflection = get_or(j, "ceiling_reflection", where, p.ceiling_reflection);
    p.max_order = get_or(j, "max_order", where, p.max_order);
    p.lead_delay_s = get_or(j, "lead_delay_ns", where, p.lead_delay_s * 1e9) * 1e-9;
    return p;
}

Scene parse_scene(const json &j, const std::string &where)
{
    only_keys(j, where, {"position", "ap", "ue", "room", "blocker", "mpcs", "image_method"});
    Scene sc;
    sc.position_index = get_or<std::uint32_t>(j, "position", where, 0);
    if (j.contains("ap"))
    {
        const json &a = j.at("ap");
        const std::string w = where + ".ap";
        only_keys(a, w, {"position", "rows", "cols", "polarizations", "boresight_azimuth_deg",
                         "boresight_elevation_deg"});
        if (a.contains("position"))
            sc.ap_position = vec3(a.at("position"), w + ".position");
        auto &arr = sc.ap_array;
        arr.rows = get_or(a, "rows", w, arr.rows);
        arr.cols = get_or(a, "cols", w, arr.cols);
        arr.polarizations = get_or(a, "polarizations", w, arr.polarizations);
        arr.boresight_azimuth_deg = get_or(a, "boresight_azimuth_deg", w, arr.boresight_azimuth_deg);
        arr.boresight_elevation_deg = get_or(a, "boresight_elevation_deg", w, arr.boresight_elevation_deg);
    }
    if (j.contains("ue"))
    {
        const json &u = j.at("ue");
        const std::string w = where + ".ue";
        only_keys(u, w, {"position", "heading_deg"});
        if (u.contains("position"))
            sc.ue_base_position = vec3(u.at("position"), w + ".position");
        sc.ue_heading_deg = get_or(u, "heading_deg", w, sc.ue_heading_deg);
    }
    if (j.contains("room"))
    {
        const Vec3 r = vec3(j.at("room"), where + ".room");
        sc.room_bounds = {r.x, r.y, r.z};
    }
    if (j.contains("blocker") && !j.at("blocker").is_null())
    {
        const json &b = j.at("blocker");
        const std::string w = where + ".blocker";
        only_keys(b, w, {"center", "radius", "height", "loss_db"});
        Blocker bl;
        if (!b.contains("center"))
            fail(w, "missing 'center'");
        bl.center = vec3(b.at("center"), w + ".center");
        bl.radius = get_or(b, "radius", w, bl.radius);
        bl.height = get_or(b, "height", w, bl.height);
        bl.loss_db = get_or(b, "loss_db", w, bl.loss_db);
        sc.blocker = bl;
    }
    if (j.contains("mpcs"))
    {
        if (j.contains("image_method"))
            fail(where, "give either 'mpcs' or 'image_method'");
        const json &list = j.at("mpcs");
        if (!list.is_array())
            fail(where + ".mpcs", "expected an array");
        for (std::size_t n = 0; n < list.size(); ++n)
            sc.mpcs.push_back(parse_mpc(list[n], where + ".mpcs[" + std::to_string(n) + "]"));
    }
    else
    {
        const ImageMethodParams p =
            j.contains("image_method") ? parse_image(j.at("image_method"), where + ".image_method") : ImageMethodParams{};
        sc.mpcs = image_method_mpcs(sc, p);
    }
    return sc;
}

// One LOS and/or NLOS scene per position; both scenarios of a position share
// the same geometry and paths.
std::vector<Scene> parse_random(const json &j, const std::string &where)
{
    only_keys(j, where, {"seed", "positions", "scenarios", "scatterers"});
    const auto seed = get_or<std::uint64_t>(j, "seed", where, 1);
    const auto positions = get_or<std::uint32_t>(j, "positions", where, 1);
    RandomSceneOptions opt;
    opt.scatterers = get_or(j, "scatterers", where, opt.scatterers);
    std::vector<Scenario> scen{Scenario::LOS, Scenario::NLOS};
    if (j.contains("scenarios"))
    {
        scen.clear();
        const json &s = j.at("scenarios");
        if (!s.is_array() || s.empty())
            fail(where + ".scenarios", "expected a non-empty array");
        for (const auto &e : s)
        {
            if (!e.is_string())
                fail(where + ".scenarios", "expected strings");
            scen.push_back(scenario_from_string(e.get<std::string>()));
        }
    }
    std::vector<Scene> out;
    for (std::uint32_t u = 0; u < positions; ++u)
        for (Scenario s : scen)
        {
            opt.with_blocker = s == Scenario::NLOS;
            Scene sc = random_scene(seed * 1000003ULL + u, opt);
            sc.position_index = u;
            out.push_back(std::move(sc));
        }
    return out;
}

json vec_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

} // namespace

namespace
{

std::vector<Scene> parse_scenes_impl(std::string_view text)
{
    json root;
    try
    {
        root = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(e.what());
    }
    if (!root.is_object())
        fail("root", "expected an object");

    std::vector<Scene> scenes;
    if (!root.contains("scenes") && !root.contains("random"))
    {
        scenes.push_back(parse_scene(root, "root"));
        return scenes;
    }
    only_keys(root, "root", {"scenes", "random"});
    if (root.contains("scenes"))
    {
        const json &list = root.at("scenes");
        if (!list.is_array())
            fail("scenes", "expected an array");
        for (std::size_t n = 0; n < list.size(); ++n)
            scenes.push_back(parse_scene(list[n], "scenes[" + std::to_string(n) + "]"));
    }
    if (root.contains("random"))
    {
        auto more = parse_random(root.at("random"), "random");
        scenes.insert(scenes.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    if (scenes.empty())
        fail("root", "no scenes");
    return scenes;
}

} // namespace

std::vector<Scene> parse_scenes(std::string_view text)
{
    try
    {
        return parse_scenes_impl(text);
    }
    catch (const std::invalid_argument &e)
    {
        throw std::invalid_argument(std::string("scene JSON ") + e.what());
    }
}

std::vector<Scene> read_scenes(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scene file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenes(ss.str());
}

std::string scenes_to_json(std::span<const Scene> scenes)
{
    json list = json::array();
    for (const Scene &sc : scenes)
    {
        json j;
        j["position"] = sc.position_index;
        j["ap"] = {{"position", vec_json(sc.ap_position)},
                   {"rows", sc.ap_array.rows},
                   {"cols", sc.ap_array.cols},
                   {"polarizations", sc.ap_array.polarizations},
                   {"boresight_azimuth_deg", sc.ap_array.boresight_azimuth_deg},
                   {"boresight_elevation_deg", sc.ap_array.boresight_elevation_deg}};
        j["ue"] = {{"position", vec_json(sc.ue_base_position)}, {"heading_deg", sc.ue_heading_deg}};
        j["room"] = json::array({sc.room_bounds[0], sc.room_bounds[1], sc.room_bounds[2]});
        if (sc.blocker)
            j["blocker"] = {{"center", vec_json(sc.blocker->center)},
                            {"radius", sc.blocker->radius},
                            {"height", sc.blocker->height},
                            {"loss_db", sc.blocker->loss_db}};
        json mp = json::array();
        for (const Mpc &m : sc.mpcs)
            mp.push_back({{"gain", json::array({m.complex_gain.real(), m.complex_gain.imag()})},
                          {"delay_s", m.excess_delay},
                          {"aoa", json::array({m.aoa.azimuth_deg, m.aoa.elevation_deg})},
                          {"aod", json::array({m.aod.azimuth_deg, m.aod.elevation_deg})},
                          {"los", m.is_los},
                          {"order", m.order},
                          {"polarization_weights",
                           json::array({m.polarization_weights[0], m.polarization_weights[1]})}});
        j["mpcs"] = std::move(mp);
        list.push_back(std::move(j));
    }
    return json{{"scenes", std::move(list)}}.dump(2) + "\n";
}

} // namespace hmdchan::io
