#include "hmdchan/io/grid_container.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace hmdchan::io
{

std::vector<std::byte> encode_grid(const EigenGainGrid &grid)
{
    const auto &ax = grid.axes();
    ByteWriter w;
    w.reserve(32 + ax.positions.size() * 4 + ax.scenarios.size() + grid.values().size() * 8);
    w.raw(std::as_bytes(std::span(grid_magic.data(), grid_magic.size())));
    w.u8(static_cast<std::uint8_t>(grid.config().facing()));
    w.u8(grid.config().mask());
    w.u32(static_cast<std::uint32_t>(ax.positions.size()));
    w.u32(static_cast<std::uint32_t>(ax.scenarios.size()));
    w.u32(static_cast<std::uint32_t>(ax.snapshots));
    w.u32(static_cast<std::uint32_t>(grid.subcarriers()));
    for (auto u : ax.positions)
        w.u32(u);
    for (auto s : ax.scenarios)
        w.u8(static_cast<std::uint8_t>(s));
    for (double v : grid.values())
        w.f64(v);
    return std::move(w).take();
}

EigenGainGrid decode_grid(std::span<const std::byte> bytes)
{
    ByteReader r(bytes);
    const auto m = r.raw(grid_magic.size());
    const std::string got(reinterpret_cast<const char *>(m.data()), m.size());
    if (got != grid_magic)
    {
        if (got.starts_with("HMDGRD"))
            throw FormatError("unsupported grid container version '" + got + "'", 6);
        throw FormatError("bad magic, not a grid container", 0);
    }
    const std::size_t facing_at = r.offset();
    const std::uint8_t facing = r.u8();
    if (facing > static_cast<std::uint8_t>(Facing::Custom))
        throw FormatError("unknown facing tag " + std::to_string(facing), facing_at);
    const std::size_t mask_at = r.offset();
    const std::uint8_t mask = r.u8();
    if (mask == 0)
        throw FormatError("empty panel mask", mask_at);

    const std::size_t dims_at = r.offset();
    const std::uint64_t n_pos = r.u32(), n_scen = r.u32(), n_snap = r.u32(), n_k = r.u32();
    std::size_t cells = 0, payload = 0;
    if (!checked_mul(n_pos, n_scen, cells) || !checked_mul(cells, n_snap, cells) || !checked_mul(cells, n_k, cells) ||
        !checked_mul(cells, 8, payload) || payload > static_cast<std::size_t>(-1) / 2)
        throw FormatError("dimension overflow", dims_at);
    const std::size_t expected = static_cast<std::size_t>(n_pos * 4 + n_scen) + payload;
    if (r.remaining() != expected)
        throw FormatError("payload length mismatch: expected " + std::to_string(expected) + " bytes, found " +
                              std::to_string(r.remaining()),
                          r.offset() + std::min(expected, r.remaining()));

    GridAxes ax;
    ax.snapshots = n_snap;
    for (std::uint64_t j = 0; j < n_pos; ++j)
        ax.positions.push_back(r.u32());
    for (std::uint64_t j = 0; j < n_scen; ++j)
    {
        const std::size_t at = r.offset();
        const std::uint8_t s = r.u8();
        if (s > 1)
            throw FormatError("bad scenario tag " + std::to_string(s), at);
        ax.scenarios.push_back(static_cast<Scenario>(s));
    }
    PanelConfig cfg = PanelConfig::from_mask(mask, static_cast<Facing>(facing));
    if (cfg.facing() != Facing::Custom)
    {
        const std::size_t p = static_cast<std::size_t>(std::popcount(mask));
        const PanelConfig preset = cfg.facing() == Facing::Forward ? PanelConfig::forward(p) : PanelConfig::backward(p);
        if (preset.mask() != mask)
            throw FormatError("panel mask " + cfg.bitstring() + " is not the " + preset.label() + " preset", mask_at);
    }
    EigenGainGrid g(std::move(ax), static_cast<std::size_t>(n_k), cfg);
    for (double &v : g.values())
        v = r.f64();
    return g;
}

void write_grid(const std::filesystem::path &path, const EigenGainGrid &grid)
{
    write_file(path, encode_grid(grid));
}

EigenGainGrid read_grid(const std::filesystem::path &path)
{
    const auto bytes = read_file(path);
    try
    {
        return decode_grid(bytes);
    }
    catch (const FormatError &e)
    {
        throw FormatError(path.string() + ": " + e.detail(), e.offset());
    }
}

std::string grid_file_name(const PanelConfig &config)
{
    return "grid_" + config.label() + ".hmdgrd";
}

} // namespace hmdchan::io
