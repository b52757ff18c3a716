#pragma once

#include "hmdchan/denoise.hpp"
#include "hmdchan/geometry.hpp"
#include "hmdchan/mobility.hpp"
#include "hmdchan/synth.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hmdchan::io
{

struct RunConfig
{
    std::filesystem::path scene_path;
    MobilityPattern mobility;
    // Unset: defaults at full scale, second half of the tap grid at desk scale.
    std::optional<DenoiseParams> denoise;
    // Always evaluated together with the full 8-panel set.
    std::vector<PanelConfig> configs;
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = "out";
    bool desk_scale = false;
    double noise_power = 1e-3;
    bool write_cir = false;

    // F1..F8 and B1..B7.
    static std::vector<PanelConfig> default_configs();

    SynthSettings synth_settings() const;
    DenoiseParams effective_denoise() const;
    // Configs to evaluate, deduplicated, with the full set first.
    std::vector<PanelConfig> evaluated_configs() const;
    // Parameter checks plus existence of the scene file.
    void validate() const;
};

// Relative paths in the document resolve against base_dir. Entries of
// "configs" are panel counts (forward presets) or PanelConfig::parse strings.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path &base_dir = {});
RunConfig read_run_config(const std::filesystem::path &path);

// Fills fields present in json_text over an existing config.
void merge_run_config(RunConfig &config, std::string_view json_text, const std::filesystem::path &base_dir = {});

std::string run_config_to_json(const RunConfig &config);

} // namespace hmdchan::io
