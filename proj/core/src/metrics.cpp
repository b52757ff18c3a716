#include "hmdchan/metrics.hpp"
#include "hmdchan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hmdchan
{

namespace
{

void require_same_shape(const EigenGainGrid &a, const EigenGainGrid &b, const char *what)
{
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": grids do not share axes and subcarriers");
    if (a.subcarriers() == 0 || a.axes().cell_count() == 0)
        throw std::invalid_argument(std::string(what) + ": empty grid");
}

// Throws DegenerateCellError listing every non-positive cell of the grid.
void require_positive(const EigenGainGrid &g, const char *what, const char *role)
{
    std::vector<DegenerateCell> bad;
    for (std::size_t c = 0; c < g.axes().cell_count(); ++c)
    {
        const auto cell = g.cell(c);
        for (std::size_t k = 0; k < cell.size(); ++k)
            if (!(cell[k] > 0.0))
                bad.push_back({g.axes().key_of(c), k});
    }
    if (bad.empty())
        return;
    std::string msg = std::string(what) + ": " + std::to_string(bad.size()) + " non-positive " + role + " cell(s)";
    const std::size_t shown = std::min<std::size_t>(bad.size(), 8);
    for (std::size_t j = 0; j < shown; ++j)
    {
        const auto &b = bad[j];
        msg += (j == 0 ? ": " : ", ");
        msg += "(u=" + std::to_string(b.key.position) + ",s=" + std::string(to_string(b.key.scenario)) +
               ",i=" + std::to_string(b.key.snapshot) + ",k=" + std::to_string(b.subcarrier) + ")";
    }
    if (bad.size() > shown)
        msg += ", ...";
    throw DegenerateCellError(msg, std::move(bad));
}

template <class F>
CellField per_cell_mean(const EigenGainGrid &num, const EigenGainGrid &den, F &&term)
{
    CellField f{num.axes(), std::vector<double>(num.axes().cell_count(), 0.0)};
    const double K = static_cast<double>(num.subcarriers());
    for (std::size_t c = 0; c < f.values.size(); ++c)
    {
        const auto a = num.cell(c), b = den.cell(c);
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k)
            s += term(a[k], b[k]);
        f.values[c] = s / K;
    }
    return f;
}

} // namespace

SeriesStats series_stats(std::span<const double> x, StdConvention convention)
{
    if (x.size() < 2)
        throw std::invalid_argument("series_stats: need at least two snapshots");
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= n;

    double den = 0.0, num = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double d = x[i] - mean;
        den += d * d;
        if (i + 1 < x.size())
            num += d * (x[i + 1] - mean);
    }
    SeriesStats s;
    s.mean = mean;
    s.std_dev = std::sqrt(den / (convention == StdConvention::Population ? n : n - 1.0));
    const bool constant = std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
    if (!constant && den > 0.0)
        s.autocorrelation = std::clamp(num / den, -1.0, 1.0);
    else
        s.std_dev = constant ? 0.0 : s.std_dev;
    return s;
}

GainTradeoff gain_tradeoff(const EigenGainGrid &grid_p, const EigenGainGrid &grid_full)
{
    require_same_shape(grid_p, grid_full, "gain_tradeoff");
    require_positive(grid_full, "gain_tradeoff", "8-panel");
    return {per_cell_mean(grid_p, grid_full, [](double a, double b) { return a / b; })};
}

VolatilityStats volatility(const CellField &mean_gain, StdConvention convention)
{
    const auto &ax = mean_gain.axes;
    if (ax.snapshots < 2)
        throw std::invalid_argument("volatility: need at least two snapshots per measurement");
    VolatilityStats out;
    for (std::size_t pu = 0; pu < ax.positions.size(); ++pu)
        for (std::size_t ps = 0; ps < ax.scenarios.size(); ++ps)
        {
            const std::span<const double> series(mean_gain.values.data() + ax.cell_index(pu, ps, 0), ax.snapshots);
            const SeriesStats s = series_stats(series, convention);
            out.entries.push_back({ax.positions[pu], ax.scenarios[ps], s.std_dev, s.autocorrelation, s.mean});
        }
    return out;
}

VolatilityStats volatility(const EigenGainGrid &grid, StdConvention convention)
{
    return volatility(grid_mean_over_subcarriers(grid), convention);
}

MinimalServiceTradeoff minimal_service_tradeoff(std::span<const double> mean_gain_p,
                                                std::span<const double> mean_gain_full, double percent)
{
    if (mean_gain_p.empty() || mean_gain_full.empty())
        throw std::invalid_argument("minimal_service_tradeoff: empty gain vector");
    MinimalServiceTradeoff m;
    m.p3_config = percentile(mean_gain_p, percent);
    m.p3_full = percentile(mean_gain_full, percent);
    if (!(m.p3_config > 0.0) || !(m.p3_full > 0.0))
        throw DegenerateCellError("minimal_service_tradeoff: non-positive percentile gain (config " +
                                      std::to_string(m.p3_config) + ", full " + std::to_string(m.p3_full) + ")",
                                  {});
    m.delta_capacity = std::abs(std::log2(m.p3_config / m.p3_full));
    return m;
}

CapacityTradeoff capacity_tradeoff(const EigenGainGrid &grid_p, const EigenGainGrid &grid_full)
{
    require_same_shape(grid_p, grid_full, "capacity_tradeoff");
    require_positive(grid_full, "capacity_tradeoff", "8-panel");
    require_positive(grid_p, "capacity_tradeoff", "p-panel");
    CellField f = per_cell_mean(grid_p, grid_full, [](double a, double b) { return std::log2(a / b); });
    for (auto &v : f.values)
        v = std::abs(v);
    return {std::move(f)};
}

RearHeadbandProfit rear_headband_profit(const EigenGainGrid &grid_back, const EigenGainGrid &grid_front)
{
    require_same_shape(grid_back, grid_front, "rear_headband_profit");
    if (grid_back.config().count() != grid_front.config().count())
        throw std::invalid_argument("rear_headband_profit: configurations differ in panel count");
    require_positive(grid_front, "rear_headband_profit", "forward-facing");
    return {per_cell_mean(grid_back, grid_front, [](double a, double b) { return a / b; })};
}

} // namespace hmdchan
