#pragma once

#include "hmdchan/io/binary.hpp"
#include "hmdchan/tensor.hpp"

#include <filesystem>
#include <string_view>

namespace hmdchan::io
{

// "HMDCIR01" | u32 n_rx | u32 n_tx | u32 n_tap | f64 tap_spacing_s | u32 u |
// u8 scenario | u32 i | (f32 re, f32 im) x n_rx*n_tx*n_tap, rx-major.
inline constexpr std::string_view cir_magic = "HMDCIR01";
inline constexpr std::size_t cir_header_bytes = 37;

std::vector<std::byte> encode_cir(const CirSnapshot &cir);
CirSnapshot decode_cir(std::span<const std::byte> bytes);

void write_cir(const std::filesystem::path &path, const CirSnapshot &cir);
CirSnapshot read_cir(const std::filesystem::path &path);

// cir_u<u>_<LOS|NLOS>_i<i>.hmdcir
std::string cir_file_name(const MeasurementKey &key);

} // namespace hmdchan::io
