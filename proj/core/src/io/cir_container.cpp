#include "hmdchan/io/cir_container.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hmdchan::io
{

namespace
{

void check_magic(ByteReader &r, std::string_view magic, const char *kind)
{
    const auto m = r.raw(magic.size());
    const std::string got(reinterpret_cast<const char *>(m.data()), m.size());
    if (got == magic)
        return;
    if (got.compare(0, magic.size() - 2, magic.substr(0, magic.size() - 2)) == 0)
        throw FormatError(std::string("unsupported ") + kind + " container version '" + got + "', expected '" +
                              std::string(magic) + "'",
                          magic.size() - 2);
    throw FormatError(std::string("bad magic, not a ") + kind + " container", 0);
}

std::uint32_t narrow_dim(std::size_t n, const char *what)
{
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument(std::string("write_cir: ") + what + " does not fit in 32 bits");
    return static_cast<std::uint32_t>(n);
}

} // namespace

std::vector<std::byte> encode_cir(const CirSnapshot &cir)
{
    const auto &t = cir.tensor;
    ByteWriter w;
    w.reserve(cir_header_bytes + t.size() * 8);
    w.raw(std::as_bytes(std::span(cir_magic.data(), cir_magic.size())));
    w.u32(narrow_dim(t.n_rx(), "n_rx"));
    w.u32(narrow_dim(t.n_tx(), "n_tx"));
    w.u32(narrow_dim(t.n_tap(), "n_tap"));
    w.f64(cir.tap_spacing);
    w.u32(cir.key.position);
    w.u8(static_cast<std::uint8_t>(cir.key.scenario));
    w.u32(cir.key.snapshot);
    for (const cplx &v : t.data())
    {
        w.f32(static_cast<float>(v.real()));
        w.f32(static_cast<float>(v.imag()));
    }
    return std::move(w).take();
}

CirSnapshot decode_cir(std::span<const std::byte> bytes)
{
    ByteReader r(bytes);
    check_magic(r, cir_magic, "CIR");
    const std::uint32_t n_rx = r.u32(), n_tx = r.u32(), n_tap = r.u32();
    const std::size_t dims_at = 8;
    const double spacing = r.f64();
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw FormatError("tap spacing must be positive and finite", 20);
    CirSnapshot cir;
    cir.tap_spacing = spacing;
    cir.key.position = r.u32();
    const std::size_t scen_at = r.offset();
    const std::uint8_t scen = r.u8();
    if (scen > 1)
        throw FormatError("scenario byte " + std::to_string(scen) + " is neither LOS (0) nor NLOS (1)", scen_at);
    cir.key.scenario = static_cast<Scenario>(scen);
    cir.key.snapshot = r.u32();

    // 8 bytes per sample; guard the product before allocating.
    std::size_t samples = 0, expected = 0;
    if (!checked_mul(n_rx, n_tx, samples) || !checked_mul(samples, n_tap, samples) ||
        !checked_mul(samples, 8, expected))
        throw FormatError("dimension overflow: n_rx*n_tx*n_tap too large", dims_at);
    if (r.remaining() != expected)
        throw FormatError("payload length mismatch: expected " + std::to_string(expected) + " bytes, found " +
                              std::to_string(r.remaining()),
                          r.offset() + std::min(expected, r.remaining()));

    std::vector<cplx> data(samples);
    for (auto &v : data)
    {
        const float re = r.f32();
        const float im = r.f32();
        v = {re, im};
    }
    cir.tensor = ComplexTensor3(n_rx, n_tx, n_tap, std::move(data));
    return cir;
}

void write_cir(const std::filesystem::path &path, const CirSnapshot &cir)
{
    const auto bytes = encode_cir(cir);
    write_file(path, bytes);
}

CirSnapshot read_cir(const std::filesystem::path &path)
{
    const auto bytes = read_file(path);
    try
    {
        return decode_cir(bytes);
    }
    catch (const FormatError &e)
    {
        throw FormatError(path.string() + ": " + e.detail(), e.offset());
    }
}

std::string cir_file_name(const MeasurementKey &key)
{
    return "cir_u" + std::to_string(key.position) + "_" + std::string(to_string(key.scenario)) + "_i" +
           std::to_string(key.snapshot) + ".hmdcir";
}

} // namespace hmdchan::io
