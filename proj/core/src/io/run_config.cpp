#include "hmdchan/io/run_config.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hmdchan::io
{

using nlohmann::json;
using namespace json_util;

namespace
{

template <std::size_t N>
std::array<double, N> fixed_array(const json &j, const std::string &where)
{
    if (!j.is_array() || j.size() != N)
        fail(where, "expected " + std::to_string(N) + " numbers");
    std::array<double, N> a{};
    for (std::size_t n = 0; n < N; ++n)
        a[n] = number(j[n], where + "[" + std::to_string(n) + "]");
    return a;
}

PanelConfig parse_config_entry(const json &e, const std::string &where)
{
    if (e.is_number_integer())
    {
        const auto p = e.get<long long>();
        if (p < 1 || p > static_cast<long long>(panel_count))
            fail(where, "panel count must be in 1..8");
        return PanelConfig::forward(static_cast<std::size_t>(p));
    }
    if (e.is_string())
    {
        try
        {
            return PanelConfig::parse(e.get<std::string>());
        }
        catch (const std::invalid_argument &ex)
        {
            fail(where, ex.what());
        }
    }
    fail(where, "expected a panel count or a configuration string");
}

void merge(RunConfig &c, const json &j, const std::filesystem::path &base)
{
    only_keys(j, "root", {"scene", "mobility", "denoise", "configs", "seed", "output_dir", "desk_scale",
                          "noise_power", "write_cir"});
    auto resolve = [&](const std::string &s) {
        std::filesystem::path p(s);
        return p.is_relative() && !base.empty() ? base / p : p;
    };
    if (j.contains("scene"))
    {
        if (!j.at("scene").is_string())
            fail("scene", "expected a path string");
        c.scene_path = resolve(j.at("scene").get<std::string>());
    }
    if (j.contains("output_dir"))
    {
        if (!j.at("output_dir").is_string())
            fail("output_dir", "expected a path string");
        c.output_dir = resolve(j.at("output_dir").get<std::string>());
    }
    if (j.contains("mobility"))
    {
        const json &m = j.at("mobility");
        only_keys(m, "mobility", {"segment_durations_s", "segment_deltas_deg", "rotation_center_offset_m",
                                  "snapshot_rate_hz"});
        auto &p = c.mobility;
        if (m.contains("segment_durations_s"))
            p.segment_durations_s = fixed_array<3>(m.at("segment_durations_s"), "mobility.segment_durations_s");
        if (m.contains("segment_deltas_deg"))
            p.segment_deltas_deg = fixed_array<3>(m.at("segment_deltas_deg"), "mobility.segment_deltas_deg");
        p.rotation_center_offset_m = get_or(m, "rotation_center_offset_m", "mobility", p.rotation_center_offset_m);
        p.snapshot_rate_hz = get_or(m, "snapshot_rate_hz", "mobility", p.snapshot_rate_hz);
    }
    c.seed = get_or(j, "seed", "root", c.seed);
    c.desk_scale = get_or(j, "desk_scale", "root", c.desk_scale);
    c.noise_power = get_or(j, "noise_power", "root", c.noise_power);
    c.write_cir = get_or(j, "write_cir", "root", c.write_cir);
    if (j.contains("denoise"))
    {
        const json &d = j.at("denoise");
        if (d.is_null())
            c.denoise.reset();
        else
        {
            only_keys(d, "denoise", {"noise_region_lo_ns", "noise_region_hi_ns", "threshold_percentile",
                                     "tau_max_ns"});
            DenoiseParams p = c.effective_denoise();
            p.noise_region_lo = get_or(d, "noise_region_lo_ns", "denoise", p.noise_region_lo * 1e9) * 1e-9;
            p.noise_region_hi = get_or(d, "noise_region_hi_ns", "denoise", p.noise_region_hi * 1e9) * 1e-9;
            p.threshold_percentile = get_or(d, "threshold_percentile", "denoise", p.threshold_percentile);
            p.tau_max = get_or(d, "tau_max_ns", "denoise", p.tau_max * 1e9) * 1e-9;
            c.denoise = p;
        }
    }
    if (j.contains("configs"))
    {
        const json &list = j.at("configs");
        if (!list.is_array() || list.empty())
            fail("configs", "expected a non-empty array");
        c.configs.clear();
        for (std::size_t n = 0; n < list.size(); ++n)
            c.configs.push_back(parse_config_entry(list[n], "configs[" + std::to_string(n) + "]"));
    }
}

json parse_document(std::string_view text)
{
    try
    {
        json j = json::parse(text.begin(), text.end());
        if (!j.is_object())
            fail("root", "expected an object");
        return j;
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument(e.what());
    }
}

} // namespace

std::vector<PanelConfig> RunConfig::default_configs()
{
    std::vector<PanelConfig> v;
    for (std::size_t p = 1; p <= panel_count; ++p)
        v.push_back(PanelConfig::forward(p));
    for (std::size_t p = 1; p < panel_count; ++p)
        v.push_back(PanelConfig::backward(p));
    return v;
}

SynthSettings RunConfig::synth_settings() const
{
    return desk_scale ? SynthSettings::desk_scale() : SynthSettings{};
}

DenoiseParams RunConfig::effective_denoise() const
{
    if (denoise)
        return *denoise;
    const SynthSettings s = synth_settings();
    return desk_scale ? DenoiseParams::for_tap_grid(s.n_tap, s.tap_spacing) : DenoiseParams{};
}

std::vector<PanelConfig> RunConfig::evaluated_configs() const
{
    std::vector<PanelConfig> out{PanelConfig::full()};
    const auto &src = configs.empty() ? default_configs() : configs;
    for (const auto &c : src)
        if (std::find(out.begin(), out.end(), c) == out.end())
            out.push_back(c);
    return out;
}

void RunConfig::validate() const
{
    if (scene_path.empty())
        throw std::invalid_argument("run config: no scene file given");
    if (!std::filesystem::is_regular_file(scene_path))
        throw std::invalid_argument("run config: scene file '" + scene_path.string() + "' does not exist");
    if (output_dir.empty())
        throw std::invalid_argument("run config: empty output directory");
    mobility.validate();
    effective_denoise().validate();
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
        throw std::invalid_argument("run config: noise_power must be finite and >= 0");
    const SynthSettings s = synth_settings();
    const auto [lo, hi] = effective_denoise().noise_taps(s.n_tap, s.tap_spacing);
    if (hi <= lo)
        throw std::invalid_argument("run config: denoise noise region holds no taps of the synthesis grid");
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path &base_dir)
{
    RunConfig c;
    merge_run_config(c, text, base_dir);
    return c;
}

void merge_run_config(RunConfig &config, std::string_view text, const std::filesystem::path &base_dir)
{
    try
    {
        merge(config, parse_document(text), base_dir);
    }
    catch (const std::invalid_argument &e)
    {
        throw std::invalid_argument(std::string("run config ") + e.what());
    }
}

RunConfig read_run_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open run config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.parent_path());
}

std::string run_config_to_json(const RunConfig &c)
{
    json j;
    j["scene"] = c.scene_path.string();
    j["output_dir"] = c.output_dir.string();
    const auto &m = c.mobility;
    j["mobility"] = {{"segment_durations_s", m.segment_durations_s},
                     {"segment_deltas_deg", m.segment_deltas_deg},
                     {"rotation_center_offset_m", m.rotation_center_offset_m},
                     {"snapshot_rate_hz", m.snapshot_rate_hz}};
    if (c.denoise)
        j["denoise"] = {{"noise_region_lo_ns", c.denoise->noise_region_lo * 1e9},
                        {"noise_region_hi_ns", c.denoise->noise_region_hi * 1e9},
                        {"threshold_percentile", c.denoise->threshold_percentile},
                        {"tau_max_ns", c.denoise->tau_max * 1e9}};
    json cfgs = json::array();
    for (const auto &p : c.configs)
        cfgs.push_back(p.facing() == Facing::Custom ? p.bitstring() : p.label());
    if (!c.configs.empty())
        j["configs"] = std::move(cfgs);
    j["seed"] = c.seed;
    j["desk_scale"] = c.desk_scale;
    j["noise_power"] = c.noise_power;
    j["write_cir"] = c.write_cir;
    return j.dump(2) + "\n";
}

} // namespace hmdchan::io
