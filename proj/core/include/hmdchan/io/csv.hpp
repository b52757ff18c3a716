#pragma once

#include "hmdchan/eigengain.hpp"
#include "hmdchan/metrics.hpp"
#include "hmdchan/mobility.hpp"

#include <span>
#include <string>
#include <vector>

namespace hmdchan::io
{

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

struct ConfigField
{
    PanelConfig config;
    CellField field;
};

struct ConfigVolatility
{
    PanelConfig config;
    VolatilityStats stats;
};

struct ConfigMinimalService
{
    PanelConfig config;
    MinimalServiceTradeoff value;
};

struct RearHeadbandField
{
    std::size_t panels = 0;
    CellField field;
};

struct SnapshotReport
{
    MeasurementKey key;
    DenoiseReport report;
};

// Every table starts with a header row; column order is fixed per file version.
std::string gain_tradeoff_csv(std::span<const ConfigField> rows);
std::string capacity_tradeoff_csv(std::span<const ConfigField> rows);
std::string mean_gain_csv(std::span<const ConfigField> rows);
std::string volatility_csv(std::span<const ConfigVolatility> rows);
std::string minimal_service_csv(std::span<const ConfigMinimalService> rows);
std::string rear_headband_csv(std::span<const RearHeadbandField> rows);
std::string denoise_report_csv(std::span<const SnapshotReport> rows);

// Plot-ready tables.
std::string fig4_gain_ratio_csv(std::span<const ConfigField> gain_tradeoff, const MobilityPattern &pattern);
std::string fig5_volatility_scatter_csv(std::span<const ConfigVolatility> rows);
std::string fig6_capacity_cdf_csv(std::span<const ConfigField> capacity_tradeoff);
// Histogram of 10 log10(ratio) in 1 dB bins over [-20, 20] dB; the outer
// bins also collect everything beyond the range.
std::string fig7_rear_headband_hist_csv(std::span<const RearHeadbandField> rows);

inline constexpr const char *gain_tradeoff_file = "gain_tradeoff_v1.csv";
inline constexpr const char *capacity_tradeoff_file = "capacity_tradeoff_v1.csv";
inline constexpr const char *mean_gain_file = "mean_gain_v1.csv";
inline constexpr const char *volatility_file = "volatility_v1.csv";
inline constexpr const char *minimal_service_file = "minimal_service_v1.csv";
inline constexpr const char *rear_headband_file = "rear_headband_v1.csv";
inline constexpr const char *denoise_report_file = "denoise_report_v1.csv";
inline constexpr const char *fig4_file = "fig4_gain_ratio_v1.csv";
inline constexpr const char *fig5_file = "fig5_volatility_scatter_v1.csv";
inline constexpr const char *fig6_file = "fig6_capacity_cdf_v1.csv";
inline constexpr const char *fig7_file = "fig7_rear_headband_hist_v1.csv";

} // namespace hmdchan::io
