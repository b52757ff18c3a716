#include "hmdchan/geometry.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hmdchan
{

namespace
{

constexpr std::array<std::string_view, panel_count> roman_names{"I", "II", "III", "IV", "V", "VI", "VII", "VIII"};

// Forward presets exclude the rear panel III for p <= 7. The 1-4 panel sets
// match the receiver drawings; 5-7 extend the 4-panel set so that 4 ⊂ 5 ⊂ 6 ⊂ 7.
constexpr std::array<std::uint8_t, 9> forward_masks{
    0x00,
    0b01000000, // VII
    0b00010001, // I, V
    0b01001010, // II, IV, VII
    0b10101010, // II, IV, VI, VIII
    0b11101010, // + VII
    0b11101011, // + I
    0b11111011, // + V
    0xFF,
};

// Backward presets always include panel III. Sets containing VII are
// mirrored front-to-back (panel k -> -k mod 8); the 2- and 4-panel sets are
// symmetric under that mirror and are instead rotated onto panel III.
constexpr std::array<std::uint8_t, 9> backward_masks{
    0x00,
    0b00000100, // III
    0b01000100, // III, VII
    0b10100100, // III, VI, VIII
    0b01010101, // I, III, V, VII
    0b10101110, // II, III, IV, VI, VIII
    0b10101111, // + I
    0b10111111, // + V
    0xFF,
};

void require_p(std::size_t p)
{
    if (p < 1 || p > panel_count)
        throw std::invalid_argument("PanelConfig: panel count must be 1..8, got " + std::to_string(p));
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string_view::npos ? std::string{} : std::string(s.substr(b, e - b + 1));
}

} // namespace

Vec3 direction_from_angles(double azimuth_deg, double elevation_deg) noexcept
{
    const double az = deg2rad(azimuth_deg), el = deg2rad(elevation_deg);
    return {std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
}

std::array<double, 2> angles_from_direction(const Vec3 &d) noexcept
{
    const double h = std::hypot(d.x, d.y);
    return {rad2deg(std::atan2(d.y, d.x)), rad2deg(std::atan2(d.z, h))};
}

Rotation3 Rotation3::about_x(double a) noexcept
{
    const double c = std::cos(a), s = std::sin(a);
    return {{1, 0, 0, 0, c, -s, 0, s, c}};
}

Rotation3 Rotation3::about_y(double a) noexcept
{
    const double c = std::cos(a), s = std::sin(a);
    return {{c, 0, s, 0, 1, 0, -s, 0, c}};
}

Rotation3 Rotation3::about_z(double a) noexcept
{
    const double c = std::cos(a), s = std::sin(a);
    return {{c, -s, 0, s, c, 0, 0, 0, 1}};
}

Rotation3 Rotation3::transposed() const noexcept
{
    return {{m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}};
}

Rotation3 operator*(const Rotation3 &a, const Rotation3 &b) noexcept
{
    Rotation3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
        {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += a.m[i * 3 + k] * b.m[k * 3 + j];
            r.m[i * 3 + j] = s;
        }
    return r;
}

double Rotation3::orthonormality_error() const noexcept
{
    const Rotation3 p = transposed() * *this;
    double err = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            err = std::max(err, std::abs(p.m[i * 3 + j] - (i == j ? 1.0 : 0.0)));
    return err;
}

std::string_view panel_roman(std::size_t panel)
{
    if (panel >= panel_count)
        throw std::out_of_range("panel index out of range");
    return roman_names[panel];
}

std::optional<std::size_t> panel_from_roman(std::string_view roman)
{
    for (std::size_t k = 0; k < panel_count; ++k)
        if (roman_names[k] == roman)
            return k;
    return std::nullopt;
}

ArrayLayout ArrayLayout::desk_scale()
{
    ArrayLayout l;
    l.elements_per_panel = 4;
    return l;
}

std::size_t ArrayLayout::grid_side() const noexcept
{
    auto s = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(elements_per_panel))));
    return s;
}

void ArrayLayout::validate() const
{
    const std::size_t s = grid_side();
    if (elements_per_panel == 0 || s * s != elements_per_panel)
        throw std::invalid_argument("ArrayLayout: elements_per_panel must be a non-zero perfect square");
    if (polarizations == 0)
        throw std::invalid_argument("ArrayLayout: polarizations must be positive");
    if (!(element_pitch > 0.0) || !(panel_radius > 0.0))
        throw std::invalid_argument("ArrayLayout: element_pitch and panel_radius must be positive");
}

PanelConfig PanelConfig::forward(std::size_t p)
{
    require_p(p);
    return {forward_masks[p], Facing::Forward};
}

PanelConfig PanelConfig::backward(std::size_t p)
{
    require_p(p);
    return {backward_masks[p], Facing::Backward};
}

PanelConfig PanelConfig::custom(const std::vector<std::size_t> &panels)
{
    std::uint8_t mask = 0;
    for (auto k : panels)
    {
        if (k >= panel_count)
            throw std::invalid_argument("PanelConfig: panel index " + std::to_string(k) + " out of range");
        mask = static_cast<std::uint8_t>(mask | (1U << k));
    }
    return from_mask(mask);
}

PanelConfig PanelConfig::from_mask(std::uint8_t mask, Facing facing)
{
    if (mask == 0)
        throw std::invalid_argument("PanelConfig: empty panel set");
    return {mask, facing};
}

PanelConfig PanelConfig::parse(std::string_view raw)
{
    const std::string text = trim(raw);
    if (text.size() == 2 && (text[0] == 'F' || text[0] == 'B') && text[1] >= '1' && text[1] <= '8')
    {
        const std::size_t p = static_cast<std::size_t>(text[1] - '0');
        return text[0] == 'F' ? forward(p) : backward(p);
    }
    std::string_view body = text;
    if (body.starts_with("C-"))
        body.remove_prefix(2);
    if (body.size() == panel_count && body.find_first_not_of("01") == std::string_view::npos)
    {
        std::uint8_t mask = 0;
        for (std::size_t k = 0; k < panel_count; ++k)
            if (body[k] == '1')
                mask = static_cast<std::uint8_t>(mask | (1U << k));
        for (std::size_t p = 1; p <= panel_count; ++p)
            if (forward_masks[p] == mask)
                return forward(p);
        return from_mask(mask);
    }
    std::vector<std::size_t> panels;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const auto comma = text.find(',', pos);
        const auto tok = trim(std::string_view(text).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        auto k = panel_from_roman(tok);
        if (!k)
            throw std::invalid_argument("PanelConfig: cannot parse '" + text + "'");
        panels.push_back(*k);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return custom(panels);
}

std::size_t PanelConfig::count() const noexcept
{
    return static_cast<std::size_t>(std::popcount(mask_));
}

std::vector<std::size_t> PanelConfig::panels() const
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < panel_count; ++k)
        if (contains(k))
            out.push_back(k);
    return out;
}

std::string PanelConfig::bitstring() const
{
    std::string s(panel_count, '0');
    for (std::size_t k = 0; k < panel_count; ++k)
        if (contains(k))
            s[k] = '1';
    return s;
}

std::string PanelConfig::label() const
{
    switch (facing_)
    {
    case Facing::Forward:
        return "F" + std::to_string(count());
    case Facing::Backward:
        return "B" + std::to_string(count());
    case Facing::Custom:
        break;
    }
    return "C-" + bitstring();
}

std::vector<std::size_t> rows_for_config(const PanelConfig &config, const ArrayLayout &layout)
{
    if (config.mask() == 0)
        throw std::invalid_argument("rows_for_config: empty panel set");
    const std::size_t per = layout.rows_per_panel();
    std::vector<std::size_t> rows;
    rows.reserve(config.count() * per);
    for (auto k : config.panels())
        for (std::size_t j = 0; j < per; ++j)
            rows.push_back(k * per + j);
    return rows;
}

ElementPlacement element_position_and_boresight(std::size_t row, const ArrayLayout &layout, const UePose &pose)
{
    if (row >= layout.n_rx())
        throw std::invalid_argument("element_position_and_boresight: row " + std::to_string(row) +
                                    " out of range [0, " + std::to_string(layout.n_rx()) + ")");
    const std::size_t panel = row / layout.rows_per_panel();
    const std::size_t element = (row % layout.rows_per_panel()) / layout.polarizations;
    const std::size_t side = layout.grid_side();
    const double half = (static_cast<double>(side) - 1.0) / 2.0;
    const double h = (static_cast<double>(element % side) - half) * layout.element_pitch;
    const double v = (half - static_cast<double>(element / side)) * layout.element_pitch;

    const double az = deg2rad(layout.panel_azimuths_deg[panel]);
    const Vec3 normal{std::cos(az), std::sin(az), 0.0};
    const Vec3 tangent{-std::sin(az), std::cos(az), 0.0};
    const Vec3 body = normal * layout.panel_radius + tangent * h + Vec3{0, 0, v};

    return {pose.center_of_mass + pose.rotation.apply(body), pose.rotation.apply(normal)};
}

ApArray ApArray::desk_scale()
{
    ApArray a;
    a.rows = 4;
    a.cols = 4;
    return a;
}

Vec3 ApArray::element_offset(std::size_t column) const
{
    if (column >= n_tx())
        throw std::invalid_argument("ApArray: column " + std::to_string(column) + " out of range");
    const std::size_t element = column / polarizations;
    const double hr = (static_cast<double>(rows) - 1.0) / 2.0;
    const double hc = (static_cast<double>(cols) - 1.0) / 2.0;
    const double u = (static_cast<double>(element % cols) - hc) * element_pitch;
    const double v = (hr - static_cast<double>(element / cols)) * element_pitch;

    // In-plane axes: horizontal tangent and the "up" vector orthogonal to boresight.
    const Vec3 b = boresight();
    Vec3 tangent = cross(Vec3{0, 0, 1}, b);
    if (norm(tangent) < 1e-12)
        tangent = {0, 1, 0};
    tangent = normalized(tangent);
    const Vec3 up = cross(b, tangent);
    return tangent * u + up * v;
}

void ApArray::validate() const
{
    if (rows == 0 || cols == 0 || polarizations == 0)
        throw std::invalid_argument("ApArray: dimensions must be positive");
    if (!(element_pitch > 0.0))
        throw std::invalid_argument("ApArray: element_pitch must be positive");
}

} // namespace hmdchan
