#pragma once

#include "hmdchan/io/csv.hpp"
#include "hmdchan/io/run_config.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmdchan::io
{

class PipelineError : public std::runtime_error
{
public:
    PipelineError(std::string stage, const std::string &message)
        : std::runtime_error("[" + stage + "] " + message), stage_(std::move(stage))
    {
    }
    const std::string &stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

// All metric tables for a set of grids; needs the full 8-panel grid.
struct MetricSet
{
    std::vector<ConfigField> mean_gain;
    std::vector<ConfigField> gain_tradeoff;
    std::vector<ConfigField> capacity_tradeoff;
    std::vector<ConfigVolatility> volatility;
    std::vector<ConfigMinimalService> minimal_service;
    std::vector<RearHeadbandField> rear_headband; // for every backward/forward pair present
};

MetricSet compute_metrics(std::span<const EigenGainGrid> grids);

// Write metric and plot-ready CSVs into dir; returns the written paths.
std::vector<std::filesystem::path> write_metric_csvs(const MetricSet &m, const std::filesystem::path &dir);
std::vector<std::filesystem::path> write_figure_csvs(const MetricSet &m, const MobilityPattern &pattern,
                                                     const std::filesystem::path &dir);

struct PipelineResult
{
    std::vector<std::filesystem::path> files; // final locations
    std::size_t snapshots = 0;
};

// Synthesis, de-noising, eigen-gain grids, metrics and reports. Outputs are
// staged next to output_dir and moved in only when every stage succeeded.
// Errors surface as PipelineError tagged with the failing stage.
PipelineResult run_pipeline(const RunConfig &config, std::ostream *log = nullptr);

} // namespace hmdchan::io
