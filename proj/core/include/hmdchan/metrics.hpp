#pragma once

#include "hmdchan/eigengain.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hmdchan
{

struct DegenerateCell
{
    MeasurementKey key;
    std::size_t subcarrier = 0;
};

// A ratio or logarithm met a zero (or negative) denominator cell.
class DegenerateCellError : public std::domain_error
{
public:
    DegenerateCellError(const std::string &what, std::vector<DegenerateCell> cells)
        : std::domain_error(what), cells_(std::move(cells))
    {
    }
    const std::vector<DegenerateCell> &cells() const noexcept { return cells_; }

private:
    std::vector<DegenerateCell> cells_;
};

// Mean over subcarriers of lambda_p / lambda_8, per snapshot.
struct GainTradeoff
{
    CellField field;
};

struct VolatilityEntry
{
    std::uint32_t position = 0;
    Scenario scenario = Scenario::LOS;
    double std_dev = 0.0;
    // Lag-1 autocorrelation; empty when the series is constant.
    std::optional<double> autocorrelation;
    double mean_gain = 0.0;
};

struct VolatilityStats
{
    std::vector<VolatilityEntry> entries; // one per (u, s), axis order
};

// Capacity gap at the 3rd-percentile gain, bits/s/Hz.
struct MinimalServiceTradeoff
{
    double delta_capacity = 0.0;
    double p3_config = 0.0;
    double p3_full = 0.0;
};

// |mean over subcarriers of log2(lambda_p / lambda_8)| per snapshot, bits/s/Hz.
struct CapacityTradeoff
{
    CellField field;
};

// Mean over subcarriers of lambda_back / lambda_front per snapshot.
struct RearHeadbandProfit
{
    CellField field;
};

enum class StdConvention
{
    Population, // divide by I
    Sample,     // divide by I - 1
};

struct SeriesStats
{
    double mean = 0.0;
    double std_dev = 0.0;
    std::optional<double> autocorrelation;
};

// Mean, standard deviation, and the lag-1 autocorrelation
//   r = sum_{i=0}^{I-2} (x_i - m)(x_{i+1} - m) / sum_{i=0}^{I-1} (x_i - m)^2.
SeriesStats series_stats(std::span<const double> series, StdConvention convention = StdConvention::Population);

GainTradeoff gain_tradeoff(const EigenGainGrid &grid_p, const EigenGainGrid &grid_full);

VolatilityStats volatility(const EigenGainGrid &grid, StdConvention convention = StdConvention::Population);
VolatilityStats volatility(const CellField &mean_gain, StdConvention convention = StdConvention::Population);

MinimalServiceTradeoff minimal_service_tradeoff(std::span<const double> mean_gain_p,
                                                std::span<const double> mean_gain_full, double percent = 3.0);

CapacityTradeoff capacity_tradeoff(const EigenGainGrid &grid_p, const EigenGainGrid &grid_full);

RearHeadbandProfit rear_headband_profit(const EigenGainGrid &grid_back, const EigenGainGrid &grid_front);

} // namespace hmdchan
