#include "hmdchan/eigengain.hpp"
#include "hmdchan/spectral.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

using namespace hmdchan;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

constexpr double ts = default_tap_spacing_s;

const ArrayLayout desk = ArrayLayout::desk_scale();
const DenoiseParams desk_dn = DenoiseParams::for_tap_grid(256, ts);

// Noise-free rank-1 flat channel: a single tap at delay 0 with per-entry
// magnitude g and row/column phases.
CirSnapshot rank1_flat(std::size_t n_rx, std::size_t n_tx, std::size_t n_tap, double g)
{
    CirSnapshot c;
    c.tensor = ComplexTensor3(n_rx, n_tx, n_tap);
    for (std::size_t r = 0; r < n_rx; ++r)
        for (std::size_t t = 0; t < n_tx; ++t)
            c.tensor(r, t, 0) = std::polar(g, 0.37 * static_cast<double>(r) - 1.1 * static_cast<double>(t));
    return c;
}

// Random early taps plus a weak noise floor.
CirSnapshot random_channel(std::mt19937_64 &rng, std::size_t n_tap = 256)
{
    CirSnapshot c = oracle::random_cir(rng, desk.n_rx(), 32, n_tap, 1e-3);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (std::size_t n = 0; n < 40; n += 3)
        for (std::size_t r = 0; r < c.tensor.n_rx(); ++r)
            for (std::size_t t = 0; t < c.tensor.n_tx(); ++t)
                c.tensor(r, t, n) = {nd(rng), nd(rng)};
    return c;
}

std::vector<PanelConfig> all_presets()
{
    std::vector<PanelConfig> v;
    for (std::size_t p = 1; p <= 8; ++p)
        v.push_back(PanelConfig::forward(p));
    for (std::size_t p = 1; p <= 7; ++p)
        v.push_back(PanelConfig::backward(p));
    return v;
}

} // namespace

TEST_CASE("zero snapshot gives a zero slice", "[eigengain]")
{
    CirSnapshot c;
    c.tensor = ComplexTensor3(desk.n_rx(), 32, 256);
    const std::vector<PanelConfig> cfgs{PanelConfig::full()};
    const auto g = snapshot_gains(std::move(c), cfgs, desk, desk_dn);
    REQUIRE(g.per_config[0].size() == 256);
    for (double v : g.per_config[0])
        REQUIRE(v == 0.0);
}

TEST_CASE("rank-1 flat channel scales with the panel count", "[eigengain]")
{
    const double g = 0.3;
    const auto cfgs = all_presets();
    const auto gains = snapshot_gains(rank1_flat(desk.n_rx(), 32, 256, g), cfgs, desk, desk_dn);
    const double full = 64.0 * 32.0 * g * g;
    for (std::size_t j = 0; j < cfgs.size(); ++j)
    {
        const double want = full * static_cast<double>(cfgs[j].count()) / 8.0;
        for (double v : gains.per_config[j])
            REQUIRE_THAT(v, WithinRel(want, 1e-12));
    }
    // Four panels: exactly half of the full array.
    for (std::size_t k = 0; k < 256; ++k)
        REQUIRE_THAT(gains.per_config[3][k] / gains.per_config[7][k], WithinRel(0.5, 1e-12));
}

TEST_CASE("subcarrier gains match a dense oracle on the selected rows", "[eigengain]")
{
    std::mt19937_64 rng(3);
    CirSnapshot c = random_channel(rng, 64);
    const CtfSnapshot ctf = fft_delay_axis(c);
    const auto cfgs = all_presets();
    const auto gains = subcarrier_gains(ctf, cfgs, desk);
    std::vector<cplx> full(desk.n_rx() * 32);
    for (std::size_t j = 0; j < cfgs.size(); ++j)
    {
        const auto rows = rows_for_config(cfgs[j], desk);
        for (std::size_t k = 0; k < 64; k += 7)
        {
            ctf.tensor.tap_matrix(k, full);
            std::vector<cplx> sub;
            for (auto r : rows)
                sub.insert(sub.end(), full.begin() + static_cast<std::ptrdiff_t>(r * 32),
                           full.begin() + static_cast<std::ptrdiff_t>((r + 1) * 32));
            REQUIRE_THAT(gains[j][k], WithinRel(oracle::lambda_max_dense(sub, rows.size(), 32), 1e-9));
        }
    }
}

TEST_CASE("nested configurations are dominated", "[eigengain]")
{
    std::mt19937_64 rng(19);
    const auto cfgs = all_presets();
    for (int trial = 0; trial < 3; ++trial)
    {
        const auto gains = snapshot_gains(random_channel(rng), cfgs, desk, desk_dn);
        for (std::size_t a = 0; a < cfgs.size(); ++a)
            for (std::size_t b = 0; b < cfgs.size(); ++b)
                if (cfgs[a].is_subset_of(cfgs[b]))
                    for (std::size_t k = 0; k < 256; ++k)
                        REQUIRE(gains.per_config[a][k] <= gains.per_config[b][k] * (1 + 1e-12));
    }
}

TEST_CASE("row order within a configuration does not matter", "[eigengain]")
{
    std::mt19937_64 rng(23);
    const CirSnapshot c = random_channel(rng);
    const auto cfgs = all_presets();
    const auto base = snapshot_gains(CirSnapshot(c), cfgs, desk, desk_dn);

    // Shuffle rows inside every panel; row sets of all configs are unchanged.
    std::vector<std::size_t> perm(desk.n_rx());
    std::iota(perm.begin(), perm.end(), 0);
    const std::size_t per = desk.rows_per_panel();
    for (std::size_t p = 0; p < panel_count; ++p)
        std::shuffle(perm.begin() + static_cast<std::ptrdiff_t>(p * per),
                     perm.begin() + static_cast<std::ptrdiff_t>((p + 1) * per), rng);
    CirSnapshot shuffled = c;
    for (std::size_t r = 0; r < desk.n_rx(); ++r)
        for (std::size_t t = 0; t < 32; ++t)
            std::copy(c.tensor.pair(perm[r], t).begin(), c.tensor.pair(perm[r], t).end(),
                      shuffled.tensor.pair(r, t).begin());
    const auto moved = snapshot_gains(std::move(shuffled), cfgs, desk, desk_dn);
    for (std::size_t j = 0; j < cfgs.size(); ++j)
        for (std::size_t k = 0; k < 256; ++k)
            REQUIRE_THAT(moved.per_config[j][k], WithinRel(base.per_config[j][k], 1e-12));
}

TEST_CASE("scaling the CIR scales every cell by |c|^2", "[eigengain]")
{
    std::mt19937_64 rng(29);
    const CirSnapshot c = random_channel(rng);
    const auto cfgs = all_presets();
    const auto base = snapshot_gains(CirSnapshot(c), cfgs, desk, desk_dn);
    const cplx s{-2.0, 0.5};
    CirSnapshot scaled = c;
    for (auto &x : scaled.tensor.data())
        x *= s;
    const auto out = snapshot_gains(std::move(scaled), cfgs, desk, desk_dn);
    REQUIRE(out.report.taps_kept == base.report.taps_kept);
    for (std::size_t j = 0; j < cfgs.size(); ++j)
        for (std::size_t k = 0; k < 256; ++k)
            REQUIRE_THAT(out.per_config[j][k], WithinRel(std::norm(s) * base.per_config[j][k], 1e-9));
}

TEST_CASE("compute_grid assembles snapshots in axis order", "[eigengain]")
{
    std::mt19937_64 rng(31);
    std::vector<CirSnapshot> snaps;
    for (std::uint32_t u : {4u, 2u})
        for (Scenario s : {Scenario::NLOS, Scenario::LOS})
            for (std::uint32_t i = 0; i < 2; ++i)
            {
                CirSnapshot c = random_channel(rng);
                c.key = {u, s, i};
                snaps.push_back(std::move(c));
            }
    const auto cfg = PanelConfig::forward(2);
    const EigenGainGrid grid = compute_grid(snaps, cfg, desk, desk_dn);
    REQUIRE(grid.axes().positions == std::vector<std::uint32_t>{2, 4});
    REQUIRE(grid.axes().scenarios == std::vector<Scenario>{Scenario::LOS, Scenario::NLOS});
    REQUIRE(grid.subcarriers() == 256);
    REQUIRE(grid.config() == cfg);
    const std::vector<PanelConfig> one{cfg};
    for (const auto &c : snaps)
    {
        const auto direct = snapshot_gains(CirSnapshot(c), one, desk, desk_dn);
        const auto cell = grid.cell(*grid.axes().find(c.key));
        for (std::size_t k = 0; k < 256; ++k)
            REQUIRE(cell[k] == direct.per_config[0][k]);
    }

    snaps.pop_back();
    REQUIRE_THROWS_AS(compute_grid(snaps, cfg, desk, desk_dn), std::invalid_argument);
    snaps.push_back(snaps.front());
    REQUIRE_THROWS_AS(compute_grid(snaps, cfg, desk, desk_dn), std::invalid_argument);
    snaps.back().key.snapshot = 1;
    snaps.back().key.position = 2;
    snaps.back().key.scenario = Scenario::NLOS;
    snaps.back().tensor = ComplexTensor3(desk.n_rx(), 32, 128);
    REQUIRE_THROWS_AS(compute_grid(snaps, cfg, desk, desk_dn), std::invalid_argument);
}

TEST_CASE("grid axes and assembler errors", "[eigengain]")
{
    REQUIRE_THROWS_AS(GridAxes::from_keys({}), std::invalid_argument);
    const std::vector<MeasurementKey> dup{{0, Scenario::LOS, 0}, {0, Scenario::LOS, 0}};
    REQUIRE_THROWS_AS(GridAxes::from_keys(dup), std::invalid_argument);
    const std::vector<MeasurementKey> holes{{0, Scenario::LOS, 0}, {1, Scenario::NLOS, 0}};
    REQUIRE_THROWS_AS(GridAxes::from_keys(holes), std::invalid_argument);

    const GridAxes ax = oracle::small_axes(1, 2);
    GridAssembler a(ax, 4, {PanelConfig::full()});
    SnapshotGains g;
    g.key = {0, Scenario::LOS, 0};
    g.per_config = {std::vector<double>(4, 1.0)};
    a.add(g);
    REQUIRE_FALSE(a.complete());
    SnapshotGains bad = g;
    bad.key.position = 9;
    REQUIRE_THROWS_AS(a.add(bad), std::invalid_argument);
    bad = g;
    bad.per_config[0].resize(3);
    REQUIRE_THROWS_AS(a.add(bad), std::invalid_argument);
    bad = g;
    bad.per_config.push_back(bad.per_config[0]);
    REQUIRE_THROWS_AS(a.add(bad), std::invalid_argument);
    REQUIRE_THROWS_AS(std::move(a).finish(), std::invalid_argument);

    GridAssembler b(ax, 4, {PanelConfig::full()});
    for (std::size_t c = 0; c < ax.cell_count(); ++c)
    {
        g.key = ax.key_of(c);
        b.add(g);
    }
    REQUIRE(b.complete());
    REQUIRE(std::move(b).finish().size() == 1);

    CirSnapshot wrong;
    wrong.tensor = ComplexTensor3(48, 32, 256);
    const std::vector<PanelConfig> cfgs{PanelConfig::full()};
    REQUIRE_THROWS_AS(snapshot_gains(std::move(wrong), cfgs, desk, desk_dn), std::invalid_argument);
}

TEST_CASE("mean over subcarriers", "[eigengain]")
{
    const GridAxes ax = oracle::small_axes(2, 3);
    const std::size_t K = 2048;
    EigenGainGrid constant(ax, K, PanelConfig::full());
    std::fill(constant.values().begin(), constant.values().end(), 2.5);
    for (double v : grid_mean_over_subcarriers(constant).values)
        REQUIRE(v == 2.5);

    EigenGainGrid ramp(ax, K, PanelConfig::full());
    for (std::size_t c = 0; c < ax.cell_count(); ++c)
        for (std::size_t k = 0; k < K; ++k)
            ramp.cell(c)[k] = static_cast<double>(k) / static_cast<double>(K);
    for (double v : grid_mean_over_subcarriers(ramp).values)
        REQUIRE_THAT(v, WithinRel(static_cast<double>(K - 1) / (2.0 * K), 1e-12));

    std::mt19937_64 rng(37);
    const auto g = oracle::random_grid(rng, ax, 300, PanelConfig::forward(3));
    const CellField f = grid_mean_over_subcarriers(g);
    REQUIRE(f.axes == ax);
    const auto want = oracle::cell_means(g);
    for (std::size_t c = 0; c < want.size(); ++c)
        REQUIRE_THAT(f.values[c], WithinRel(want[c], 1e-12));
    REQUIRE(f.at({1, Scenario::NLOS, 2}) == f.values[ax.cell_index(1, 1, 2)]);
    REQUIRE_THROWS_AS(f.at({5, Scenario::LOS, 0}), std::out_of_range);
}
