#pragma once

#include "hmdchan/denoise.hpp"
#include "hmdchan/geometry.hpp"
#include "hmdchan/tensor.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hmdchan
{

// Measurement axes shared by grids and per-snapshot fields: every
// (position, scenario, snapshot) combination is a cell.
struct GridAxes
{
    std::vector<std::uint32_t> positions;
    std::vector<Scenario> scenarios;
    std::size_t snapshots = 0;

    std::size_t cell_count() const noexcept { return positions.size() * scenarios.size() * snapshots; }
    std::size_t measurement_count() const noexcept { return positions.size() * scenarios.size(); }
    std::size_t cell_index(std::size_t pos_idx, std::size_t scen_idx, std::size_t snapshot) const noexcept
    {
        return (pos_idx * scenarios.size() + scen_idx) * snapshots + snapshot;
    }
    MeasurementKey key_of(std::size_t cell) const;
    std::optional<std::size_t> find(const MeasurementKey &key) const noexcept;

    // Sorted axes covering exactly the given keys; throws unless every
    // combination occurs exactly once.
    static GridAxes from_keys(std::span<const MeasurementKey> keys);

    friend bool operator==(const GridAxes &, const GridAxes &) = default;
};

// One value per (u, s, i) cell.
struct CellField
{
    GridAxes axes;
    std::vector<double> values;

    double at(const MeasurementKey &key) const;
};

// lambda[u, s, i, k] for one panel configuration.
class EigenGainGrid
{
public:
    EigenGainGrid() = default;
    EigenGainGrid(GridAxes axes, std::size_t subcarriers, PanelConfig config);

    const GridAxes &axes() const noexcept { return axes_; }
    std::size_t subcarriers() const noexcept { return subcarriers_; }
    const PanelConfig &config() const noexcept { return config_; }

    std::span<double> cell(std::size_t c) noexcept { return {values_.data() + c * subcarriers_, subcarriers_}; }
    std::span<const double> cell(std::size_t c) const noexcept
    {
        return {values_.data() + c * subcarriers_, subcarriers_};
    }
    double operator()(std::size_t c, std::size_t k) const noexcept { return values_[c * subcarriers_ + k]; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool same_shape(const EigenGainGrid &o) const noexcept { return axes_ == o.axes_ && subcarriers_ == o.subcarriers_; }

private:
    GridAxes axes_;
    std::size_t subcarriers_ = 0;
    PanelConfig config_;
    std::vector<double> values_;
};

// Per-subcarrier dominant eigenvalues of one snapshot for several configs.
struct SnapshotGains
{
    MeasurementKey key;
    DenoiseReport report;
    std::vector<std::vector<double>> per_config; // [config][k]
};

// lambda_1 of the CTF rows selected by each config, at every subcarrier.
std::vector<std::vector<double>> subcarrier_gains(const CtfSnapshot &ctf, std::span<const PanelConfig> configs,
                                                  const ArrayLayout &layout);

// De-noise the full CIR once, transform to the frequency domain, then
// evaluate every config. Consumes the snapshot to reuse its storage.
SnapshotGains snapshot_gains(CirSnapshot &&cir, std::span<const PanelConfig> configs, const ArrayLayout &layout,
                             const DenoiseParams &params);

std::vector<EigenGainGrid> compute_grids(std::span<const CirSnapshot> snapshots, std::span<const PanelConfig> configs,
                                         const ArrayLayout &layout, const DenoiseParams &params,
                                         std::vector<SnapshotGains> *reports = nullptr);

EigenGainGrid compute_grid(std::span<const CirSnapshot> snapshots, const PanelConfig &config,
                           const ArrayLayout &layout, const DenoiseParams &params);

// Collects SnapshotGains, possibly out of order, into one grid per config.
class GridAssembler
{
public:
    GridAssembler(GridAxes axes, std::size_t subcarriers, std::vector<PanelConfig> configs);

    void add(const SnapshotGains &gains);
    bool complete() const noexcept;
    // Throws if any cell is missing.
    std::vector<EigenGainGrid> finish() &&;

private:
    std::vector<EigenGainGrid> grids_;
    std::vector<bool> filled_;
};

// Arithmetic mean over subcarriers for every cell.
CellField grid_mean_over_subcarriers(const EigenGainGrid &grid);

} // namespace hmdchan
