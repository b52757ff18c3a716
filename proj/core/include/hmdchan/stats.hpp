#pragma once

#include <cstddef>
#include <span>

namespace hmdchan
{

// Nearest-rank percentile: the ceil(q/100 * N)-th smallest value, 0 < q <= 100.
double percentile(std::span<const double> values, double q);

// 1-based rank used by percentile() for N values.
std::size_t nearest_rank(std::size_t n, double q);

} // namespace hmdchan
