#pragma once

#include "hmdchan/eigengain.hpp"
#include "hmdchan/io/binary.hpp"

#include <filesystem>
#include <string_view>

namespace hmdchan::io
{

// "HMDGRD01" | u8 facing | u8 panel mask | u32 n_positions | u32 n_scenarios |
// u32 n_snapshots | u32 n_subcarriers | u32 position ids | u8 scenario tags |
// f64 values in (u, s, i, k) order.
inline constexpr std::string_view grid_magic = "HMDGRD01";

std::vector<std::byte> encode_grid(const EigenGainGrid &grid);
EigenGainGrid decode_grid(std::span<const std::byte> bytes);

void write_grid(const std::filesystem::path &path, const EigenGainGrid &grid);
EigenGainGrid read_grid(const std::filesystem::path &path);

// grid_<label>.hmdgrd
std::string grid_file_name(const PanelConfig &config);

} // namespace hmdchan::io
