#include "hmdchan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace hmdchan
{

std::size_t nearest_rank(std::size_t n, double q)
{
    if (n == 0)
        throw std::invalid_argument("percentile: empty input");
    if (!(q > 0.0 && q <= 100.0))
        throw std::invalid_argument("percentile: q must lie in (0, 100]");
    // q*N is formed before the division so integer percents stay exact.
    const long double x = static_cast<long double>(q) * static_cast<long double>(n) / 100.0L;
    const long double rounded = std::nearbyint(x);
    const long double r = std::abs(x - rounded) <= 1e-12L * std::max(1.0L, x) ? rounded : std::ceil(x);
    return std::clamp<std::size_t>(static_cast<std::size_t>(r), 1, n);
}

double percentile(std::span<const double> values, double q)
{
    const std::size_t rank = nearest_rank(values.size(), q);
    std::vector<double> tmp(values.begin(), values.end());
    auto nth = tmp.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(tmp.begin(), nth, tmp.end());
    return *nth;
}

} // namespace hmdchan
