#pragma once

#include "hmdchan/tensor.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace hmdchan
{

struct DenoiseParams
{
    // Open delay interval whose taps estimate the noise floor, seconds.
    double noise_region_lo = 1.35e-6;
    double noise_region_hi = 2.7e-6;
    double threshold_percentile = 95.0;
    double tau_max = 105e-9;

    // Second half of an n_tap grid, for reduced tap counts.
    static DenoiseParams for_tap_grid(std::size_t n_tap, double tap_spacing);

    void validate() const;
    // Taps with index below this survive the delay window.
    std::size_t window_taps(double tap_spacing) const;
    // Tap indices whose delay n * tap_spacing lies inside the noise region.
    std::pair<std::size_t, std::size_t> noise_taps(std::size_t n_tap, double tap_spacing) const;
};

struct DenoiseReport
{
    std::vector<double> lambda_noise;
    double threshold = 0.0;
    std::size_t taps_kept = 0;
    std::size_t taps_zeroed_by_threshold = 0;
    std::size_t taps_zeroed_by_window = 0;
};

// lambda_1 of every per-tap MIMO matrix.
std::vector<double> delay_eigen_profile(const CirSnapshot &cir);

// Full de-noising: noise-region eigenvalues, percentile threshold, strict
// sub-threshold zeroing, then the delay window.
std::pair<CirSnapshot, DenoiseReport> denoise(const CirSnapshot &cir, const DenoiseParams &params = {});
DenoiseReport denoise_inplace(CirSnapshot &cir, const DenoiseParams &params = {});

// Same procedure with a caller-supplied threshold; the noise-region
// eigenvalues are still reported.
DenoiseReport denoise_with_threshold_inplace(CirSnapshot &cir, double threshold, const DenoiseParams &params = {});

} // namespace hmdchan
