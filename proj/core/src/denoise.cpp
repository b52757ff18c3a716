#include "hmdchan/denoise.hpp"
#include "hmdchan/linalg.hpp"
#include "hmdchan/parallel.hpp"
#include "hmdchan/stats.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace hmdchan
{

namespace
{

double tap_lambda(const ComplexTensor3 &h, std::size_t tap, std::vector<cplx> &scratch)
{
    h.tap_matrix(tap, scratch);
    return dominant_sq_singular_value(ConstMatrixView(scratch, h.n_rx(), h.n_tx()));
}

// lambda_1 for the taps in [lo, hi).
std::vector<double> lambdas(const ComplexTensor3 &h, std::size_t lo, std::size_t hi)
{
    std::vector<double> out(hi > lo ? hi - lo : 0);
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel num_threads(worker_threads())
    {
        std::vector<cplx> scratch(h.n_rx() * h.n_tx());
#pragma omp for schedule(dynamic, 4)
        for (std::ptrdiff_t j = 0; j < n; ++j)
            out[static_cast<std::size_t>(j)] = tap_lambda(h, lo + static_cast<std::size_t>(j), scratch);
    }
    return out;
}

DenoiseReport run(CirSnapshot &cir, const DenoiseParams &params, std::optional<double> fixed_threshold)
{
    params.validate();
    cir.validate();
    auto &h = cir.tensor;
    const auto [nlo, nhi] = params.noise_taps(h.n_tap(), cir.tap_spacing);
    if (nlo >= nhi)
        throw std::invalid_argument("denoise: noise region (" + std::to_string(params.noise_region_lo) + ", " +
                                    std::to_string(params.noise_region_hi) + ") s contains no taps of the " +
                                    std::to_string(h.n_tap()) + "-tap grid");

    DenoiseReport rep;
    rep.lambda_noise = lambdas(h, nlo, nhi);
    rep.threshold = fixed_threshold ? *fixed_threshold : percentile(rep.lambda_noise, params.threshold_percentile);

    const std::size_t window = std::min(params.window_taps(cir.tap_spacing), h.n_tap());
    const auto in_window = lambdas(h, 0, window);
    for (std::size_t n = 0; n < window; ++n)
    {
        const double lam = in_window[n];
        if (lam < rep.threshold || lam == 0.0)
        {
            // Already-empty taps count towards the threshold bucket so the
            // three counters always add up to n_tap.
            h.zero_tap(n);
            ++rep.taps_zeroed_by_threshold;
        }
        else
            ++rep.taps_kept;
    }
    for (std::size_t n = window; n < h.n_tap(); ++n)
        h.zero_tap(n);
    rep.taps_zeroed_by_window = h.n_tap() - window;
    return rep;
}

} // namespace

DenoiseParams DenoiseParams::for_tap_grid(std::size_t n_tap, double tap_spacing)
{
    DenoiseParams p;
    const double half = static_cast<double>(n_tap / 2);
    p.noise_region_lo = (half - 0.5) * tap_spacing;
    p.noise_region_hi = static_cast<double>(n_tap) * tap_spacing;
    return p;
}

void DenoiseParams::validate() const
{
    if (!(noise_region_lo >= 0.0 && noise_region_lo < noise_region_hi))
        throw std::invalid_argument("DenoiseParams: noise region must satisfy 0 <= lo < hi");
    if (!(threshold_percentile > 0.0 && threshold_percentile <= 100.0))
        throw std::invalid_argument("DenoiseParams: threshold percentile must lie in (0, 100]");
    if (!(tau_max > 0.0))
        throw std::invalid_argument("DenoiseParams: tau_max must be positive");
    if (!(tau_max < noise_region_lo))
        throw std::invalid_argument("DenoiseParams: tau_max must lie below the noise region");
}

std::size_t DenoiseParams::window_taps(double tap_spacing) const
{
    return static_cast<std::size_t>(std::floor(tau_max / tap_spacing + 1e-9));
}

std::pair<std::size_t, std::size_t> DenoiseParams::noise_taps(std::size_t n_tap, double tap_spacing) const
{
    std::size_t lo = n_tap, hi = 0;
    for (std::size_t n = 0; n < n_tap; ++n)
    {
        const double d = static_cast<double>(n) * tap_spacing;
        if (d > noise_region_lo && d < noise_region_hi)
        {
            lo = std::min(lo, n);
            hi = n + 1;
        }
    }
    if (lo >= hi)
        return {0, 0};
    return {lo, hi};
}

std::vector<double> delay_eigen_profile(const CirSnapshot &cir)
{
    cir.validate();
    return lambdas(cir.tensor, 0, cir.tensor.n_tap());
}

DenoiseReport denoise_inplace(CirSnapshot &cir, const DenoiseParams &params)
{
    return run(cir, params, std::nullopt);
}

DenoiseReport denoise_with_threshold_inplace(CirSnapshot &cir, double threshold, const DenoiseParams &params)
{
    if (!(threshold >= 0.0))
        throw std::invalid_argument("denoise: threshold must be non-negative");
    return run(cir, params, threshold);
}

std::pair<CirSnapshot, DenoiseReport> denoise(const CirSnapshot &cir, const DenoiseParams &params)
{
    CirSnapshot out = cir;
    DenoiseReport rep = denoise_inplace(out, params);
    return {std::move(out), std::move(rep)};
}

} // namespace hmdchan
