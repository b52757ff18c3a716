#include "hmdchan/eigengain.hpp"
#include "hmdchan/linalg.hpp"
#include "hmdchan/parallel.hpp"
#include "hmdchan/spectral.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace hmdchan
{

MeasurementKey GridAxes::key_of(std::size_t cell) const
{
    if (cell >= cell_count())
        throw std::out_of_range("GridAxes::key_of: cell out of range");
    const std::size_t i = cell % snapshots;
    const std::size_t m = cell / snapshots;
    return {positions[m / scenarios.size()], scenarios[m % scenarios.size()], static_cast<std::uint32_t>(i)};
}

std::optional<std::size_t> GridAxes::find(const MeasurementKey &key) const noexcept
{
    const auto pu = std::find(positions.begin(), positions.end(), key.position);
    const auto ps = std::find(scenarios.begin(), scenarios.end(), key.scenario);
    if (pu == positions.end() || ps == scenarios.end() || key.snapshot >= snapshots)
        return std::nullopt;
    return cell_index(static_cast<std::size_t>(pu - positions.begin()), static_cast<std::size_t>(ps - scenarios.begin()),
                      key.snapshot);
}

GridAxes GridAxes::from_keys(std::span<const MeasurementKey> keys)
{
    if (keys.empty())
        throw std::invalid_argument("GridAxes: no snapshots");
    std::set<std::uint32_t> pos;
    std::set<Scenario> scen;
    std::uint32_t max_i = 0;
    for (const auto &k : keys)
    {
        pos.insert(k.position);
        scen.insert(k.scenario);
        max_i = std::max(max_i, k.snapshot);
    }
    GridAxes ax{{pos.begin(), pos.end()}, {scen.begin(), scen.end()}, static_cast<std::size_t>(max_i) + 1};
    std::vector<bool> seen(ax.cell_count(), false);
    for (const auto &k : keys)
    {
        const std::size_t c = *ax.find(k);
        if (seen[c])
            throw std::invalid_argument("GridAxes: duplicate snapshot u=" + std::to_string(k.position) + " s=" +
                                        std::string(to_string(k.scenario)) + " i=" + std::to_string(k.snapshot));
        seen[c] = true;
    }
    if (keys.size() != ax.cell_count())
        throw std::invalid_argument("GridAxes: incomplete set of snapshots (" + std::to_string(keys.size()) + " of " +
                                    std::to_string(ax.cell_count()) + " cells)");
    return ax;
}

double CellField::at(const MeasurementKey &key) const
{
    const auto c = axes.find(key);
    if (!c)
        throw std::out_of_range("CellField: unknown measurement key");
    return values[*c];
}

EigenGainGrid::EigenGainGrid(GridAxes axes, std::size_t subcarriers, PanelConfig config)
    : axes_(std::move(axes)), subcarriers_(subcarriers), config_(config),
      values_(axes_.cell_count() * subcarriers, 0.0)
{
}

std::vector<std::vector<double>> subcarrier_gains(const CtfSnapshot &ctf, std::span<const PanelConfig> configs,
                                                  const ArrayLayout &layout)
{
    const auto &h = ctf.tensor;
    layout.validate();
    if (h.n_rx() != layout.n_rx())
        throw std::invalid_argument("subcarrier_gains: CTF has " + std::to_string(h.n_rx()) + " rows, layout expects " +
                                    std::to_string(layout.n_rx()));
    const std::size_t n_tx = h.n_tx(), K = h.n_tap(), per = layout.rows_per_panel();

    // Tall configs share per-panel column Grams when there are several of
    // them; otherwise each config iterates on its own rows.
    std::vector<std::vector<std::size_t>> rows;
    std::vector<bool> use_gram;
    std::uint8_t gram_panels = 0; // panels whose column Gram is needed
    std::size_t tall = 0;
    for (const auto &c : configs)
    {
        rows.push_back(rows_for_config(c, layout));
        tall += rows.back().size() >= n_tx;
    }
    for (std::size_t c = 0; c < configs.size(); ++c)
    {
        use_gram.push_back(tall >= 3 && rows[c].size() >= n_tx);
        if (use_gram.back())
            gram_panels = static_cast<std::uint8_t>(gram_panels | configs[c].mask());
    }

    std::vector<std::vector<double>> out(configs.size(), std::vector<double>(K, 0.0));
    const auto n_k = static_cast<std::ptrdiff_t>(K);
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<cplx> full(h.n_rx() * n_tx);
        std::vector<cplx> sub;
        std::vector<std::vector<cplx>> panel_gram(panel_count);
        std::vector<cplx> gram(n_tx * n_tx);
#pragma omp for schedule(dynamic, 8)
        for (std::ptrdiff_t kk = 0; kk < n_k; ++kk)
        {
            const auto k = static_cast<std::size_t>(kk);
            h.tap_matrix(k, full);
            for (std::size_t p = 0; p < panel_count; ++p)
            {
                if (!((gram_panels >> p) & 1U))
                    continue;
                panel_gram[p].assign(n_tx * n_tx, cplx{});
                const std::span<const cplx> block(full.data() + p * per * n_tx, per * n_tx);
                accumulate_column_gram(ConstMatrixView(block, per, n_tx), panel_gram[p]);
            }
            for (std::size_t c = 0; c < configs.size(); ++c)
            {
                if (use_gram[c])
                {
                    std::fill(gram.begin(), gram.end(), cplx{});
                    for (auto p : configs[c].panels())
                        for (std::size_t j = 0; j < gram.size(); ++j)
                            gram[j] += panel_gram[p][j];
                    out[c][k] = dominant_eigenvalue_psd(gram, n_tx).value;
                }
                else
                {
                    sub.resize(rows[c].size() * n_tx);
                    for (std::size_t r = 0; r < rows[c].size(); ++r)
                        std::copy_n(full.data() + rows[c][r] * n_tx, n_tx, sub.data() + r * n_tx);
                    out[c][k] = dominant_sq_singular_value(ConstMatrixView(sub, rows[c].size(), n_tx));
                }
            }
        }
    }
    return out;
}

SnapshotGains snapshot_gains(CirSnapshot &&cir, std::span<const PanelConfig> configs, const ArrayLayout &layout,
                             const DenoiseParams &params)
{
    if (cir.tensor.n_rx() != layout.n_rx())
        throw std::invalid_argument("snapshot_gains: CIR has " + std::to_string(cir.tensor.n_rx()) +
                                    " rows, layout expects " + std::to_string(layout.n_rx()));
    SnapshotGains g;
    g.key = cir.key;
    g.report = denoise_inplace(cir, params);
    const CtfSnapshot ctf = fft_delay_axis(std::move(cir));
    g.per_config = subcarrier_gains(ctf, configs, layout);
    return g;
}

GridAssembler::GridAssembler(GridAxes axes, std::size_t subcarriers, std::vector<PanelConfig> configs)
    : filled_(axes.cell_count(), false)
{
    for (const auto &c : configs)
        grids_.emplace_back(axes, subcarriers, c);
}

void GridAssembler::add(const SnapshotGains &gains)
{
    if (grids_.empty())
        return;
    const auto c = grids_.front().axes().find(gains.key);
    if (!c)
        throw std::invalid_argument("GridAssembler: snapshot key outside the grid axes");
    if (gains.per_config.size() != grids_.size())
        throw std::invalid_argument("GridAssembler: config count mismatch");
    for (std::size_t g = 0; g < grids_.size(); ++g)
    {
        if (gains.per_config[g].size() != grids_[g].subcarriers())
            throw std::invalid_argument("GridAssembler: subcarrier count mismatch");
        std::copy(gains.per_config[g].begin(), gains.per_config[g].end(), grids_[g].cell(*c).begin());
    }
    filled_[*c] = true;
}

bool GridAssembler::complete() const noexcept
{
    return std::all_of(filled_.begin(), filled_.end(), [](bool b) { return b; });
}

std::vector<EigenGainGrid> GridAssembler::finish() &&
{
    if (!complete())
        throw std::invalid_argument("GridAssembler: grid has missing cells");
    return std::move(grids_);
}

std::vector<EigenGainGrid> compute_grids(std::span<const CirSnapshot> snapshots, std::span<const PanelConfig> configs,
                                         const ArrayLayout &layout, const DenoiseParams &params,
                                         std::vector<SnapshotGains> *reports)
{
    if (snapshots.empty())
        throw std::invalid_argument("compute_grids: no snapshots");
    const auto &first = snapshots.front();
    std::vector<MeasurementKey> keys;
    for (const auto &s : snapshots)
    {
        if (!s.tensor.same_shape(first.tensor) || s.tap_spacing != first.tap_spacing)
            throw std::invalid_argument("compute_grids: snapshot dimensions differ");
        keys.push_back(s.key);
    }
    GridAssembler asm_(GridAxes::from_keys(keys), first.tensor.n_tap(), {configs.begin(), configs.end()});
    for (const auto &s : snapshots)
    {
        CirSnapshot copy = s;
        auto g = snapshot_gains(std::move(copy), configs, layout, params);
        asm_.add(g);
        if (reports)
        {
            g.per_config.clear();
            reports->push_back(std::move(g));
        }
    }
    return std::move(asm_).finish();
}

EigenGainGrid compute_grid(std::span<const CirSnapshot> snapshots, const PanelConfig &config, const ArrayLayout &layout,
                           const DenoiseParams &params)
{
    const PanelConfig cfgs[] = {config};
    return std::move(compute_grids(snapshots, cfgs, layout, params).front());
}

CellField grid_mean_over_subcarriers(const EigenGainGrid &grid)
{
    CellField f{grid.axes(), std::vector<double>(grid.axes().cell_count(), 0.0)};
    const double K = static_cast<double>(grid.subcarriers());
    for (std::size_t c = 0; c < f.values.size(); ++c)
    {
        double s = 0.0;
        for (double v : grid.cell(c))
            s += v;
        f.values[c] = s / K;
    }
    return f;
}

} // namespace hmdchan
