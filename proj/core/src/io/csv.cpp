#include "hmdchan/io/csv.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace hmdchan::io
{

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

namespace
{

using Buf = fmt::memory_buffer;

void key_cols(Buf &b, const MeasurementKey &k)
{
    fmt::format_to(std::back_inserter(b), "{},{},{}", k.position, to_string(k.scenario), k.snapshot);
}

std::string per_cell(std::span<const ConfigField> rows, const char *value_col)
{
    Buf b;
    fmt::format_to(std::back_inserter(b), "config,panels,mask,position,scenario,snapshot,{}\n", value_col);
    for (const auto &r : rows)
        for (std::size_t c = 0; c < r.field.values.size(); ++c)
        {
            fmt::format_to(std::back_inserter(b), "{},{},{},", r.config.label(), r.config.count(),
                           r.config.bitstring());
            key_cols(b, r.field.axes.key_of(c));
            fmt::format_to(std::back_inserter(b), ",{}\n", format_double(r.field.values[c]));
        }
    return fmt::to_string(b);
}

std::string optional_double(const std::optional<double> &v)
{
    return v ? format_double(*v) : std::string("undef");
}

} // namespace

std::string gain_tradeoff_csv(std::span<const ConfigField> rows)
{
    return per_cell(rows, "gain_ratio");
}

std::string capacity_tradeoff_csv(std::span<const ConfigField> rows)
{
    return per_cell(rows, "delta_capacity_bps_hz");
}

std::string mean_gain_csv(std::span<const ConfigField> rows)
{
    return per_cell(rows, "mean_gain");
}

std::string volatility_csv(std::span<const ConfigVolatility> rows)
{
    Buf b;
    fmt::format_to(std::back_inserter(b), "config,panels,mask,position,scenario,std_dev,autocorrelation,mean_gain\n");
    for (const auto &r : rows)
        for (const auto &e : r.stats.entries)
            fmt::format_to(std::back_inserter(b), "{},{},{},{},{},{},{},{}\n", r.config.label(), r.config.count(),
                           r.config.bitstring(), e.position, to_string(e.scenario), format_double(e.std_dev),
                           optional_double(e.autocorrelation), format_double(e.mean_gain));
    return fmt::to_string(b);
}

std::string minimal_service_csv(std::span<const ConfigMinimalService> rows)
{
    Buf b;
    fmt::format_to(std::back_inserter(b), "config,panels,mask,p3_config,p3_full,delta_capacity_bps_hz\n");
    for (const auto &r : rows)
        fmt::format_to(std::back_inserter(b), "{},{},{},{},{},{}\n", r.config.label(), r.config.count(),
                       r.config.bitstring(), format_double(r.value.p3_config), format_double(r.value.p3_full),
                       format_double(r.value.delta_capacity));
    return fmt::to_string(b);
}

std::string rear_headband_csv(std::span<const RearHeadbandField> rows)
{
    Buf b;
    fmt::format_to(std::back_inserter(b), "panels,position,scenario,snapshot,ratio\n");
    for (const auto &r : rows)
        for (std::size_t c = 0; c < r.field.values.size(); ++c)
        {
            fmt::format_to(std::back_inserter(b), "{},", r.panels);
            key_cols(b, r.field.axes.key_of(c));
            fmt::format_to(std::back_inserter(b), ",{}\n", format_double(r.field.values[c]));
        }
    return fmt::to_string(b);
}

std::string denoise_report_csv(std::span<const SnapshotReport> rows)
{
    Buf b;
    fmt::format_to(std::back_inserter(b), "position,scenario,snapshot,noise_taps,threshold,taps_kept,"
                                          "taps_zeroed_by_threshold,taps_zeroed_by_window\n");
    for (const auto &r : rows)
    {
        key_cols(b, r.key);
        fmt::format_to(std::back_inserter(b), ",{},{},{},{},{}\n", r.report.lambda_noise.size(),
                       format_double(r.report.threshold), r.report.taps_kept, r.report.taps_zeroed_by_threshold,
                       r.report.taps_zeroed_by_window);
    }
    return fmt::to_string(b);
}

std::string fig4_gain_ratio_csv(std::span<const ConfigField> rows, const MobilityPattern &pattern)
{
    Buf b;
    fmt::format_to(std::back_inserter(b), "panels,facing,config,position,scenario,snapshot,segment,gain_ratio\n");
    for (const auto &r : rows)
    {
        const char *facing = r.config.facing() == Facing::Forward    ? "forward"
                             : r.config.facing() == Facing::Backward ? "backward"
                                                                     : "custom";
        for (std::size_t c = 0; c < r.field.values.size(); ++c)
        {
            const MeasurementKey k = r.field.axes.key_of(c);
            fmt::format_to(std::back_inserter(b), "{},{},{},", r.config.count(), facing, r.config.label());
            key_cols(b, k);
            fmt::format_to(std::back_inserter(b), ",{},{}\n", pattern.segment_of(pattern.snapshot_time(k.snapshot)) + 1,
                           format_double(r.field.values[c]));
        }
    }
    return fmt::to_string(b);
}

std::string fig5_volatility_scatter_csv(std::span<const ConfigVolatility> rows)
{
    Buf b;
    fmt::format_to(std::back_inserter(b),
                   "config,panels,position,scenario,std_dev,autocorrelation,mean_gain,mean_gain_db\n");
    for (const auto &r : rows)
        for (const auto &e : r.stats.entries)
            fmt::format_to(std::back_inserter(b), "{},{},{},{},{},{},{},{}\n", r.config.label(), r.config.count(),
                           e.position, to_string(e.scenario), format_double(e.std_dev),
                           optional_double(e.autocorrelation), format_double(e.mean_gain),
                           e.mean_gain > 0.0 ? format_double(10.0 * std::log10(e.mean_gain)) : std::string("-inf"));
    return fmt::to_string(b);
}

std::string fig6_capacity_cdf_csv(std::span<const ConfigField> rows)
{
    Buf b;
    fmt::format_to(std::back_inserter(b), "config,panels,rank,delta_capacity_bps_hz,cdf\n");
    for (const auto &r : rows)
    {
        std::vector<double> v = r.field.values;
        std::sort(v.begin(), v.end());
        for (std::size_t n = 0; n < v.size(); ++n)
            fmt::format_to(std::back_inserter(b), "{},{},{},{},{}\n", r.config.label(), r.config.count(), n + 1,
                           format_double(v[n]),
                           format_double(static_cast<double>(n + 1) / static_cast<double>(v.size())));
    }
    return fmt::to_string(b);
}

std::string fig7_rear_headband_hist_csv(std::span<const RearHeadbandField> rows)
{
    constexpr int lo = -20, hi = 20;
    Buf b;
    fmt::format_to(std::back_inserter(b), "panels,bin_lo_db,bin_hi_db,count,fraction\n");
    for (const auto &r : rows)
    {
        std::vector<std::size_t> counts(hi - lo, 0);
        for (double v : r.field.values)
        {
            const double db = v > 0.0 ? 10.0 * std::log10(v) : -1e300;
            const double bin = std::clamp(std::floor(db) - lo, 0.0, static_cast<double>(hi - lo - 1));
            ++counts[static_cast<std::size_t>(bin)];
        }
        const double n = static_cast<double>(r.field.values.size());
        for (int j = 0; j < hi - lo; ++j)
            fmt::format_to(std::back_inserter(b), "{},{},{},{},{}\n", r.panels, lo + j, lo + j + 1,
                           counts[static_cast<std::size_t>(j)],
                           format_double(n > 0 ? static_cast<double>(counts[static_cast<std::size_t>(j)]) / n : 0.0));
    }
    return fmt::to_string(b);
}

} // namespace hmdchan::io
