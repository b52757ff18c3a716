#include "hmdchan/eigengain.hpp"
#include "hmdchan/linalg.hpp"
#include "hmdchan/spectral.hpp"
#include "hmdchan/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace hmdchan;

namespace
{

std::vector<cplx> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> m(rows * cols);
    for (auto &x : m)
        x = {nd(rng), nd(rng)};
    return m;
}

// Rank-dominated matrix, like a LOS subcarrier.
std::vector<cplx> channel_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed)
{
    auto m = random_matrix(rows, cols, seed);
    for (auto &x : m)
        x *= 0.05;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m[r * cols + c] += std::polar(1.0, 0.3 * static_cast<double>(r) - 0.8 * static_cast<double>(c));
    return m;
}

void BM_DominantNoise(benchmark::State &state)
{
    const auto rows = static_cast<std::size_t>(state.range(0)), cols = static_cast<std::size_t>(state.range(1));
    const auto h = random_matrix(rows, cols, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(dominant_sq_singular_value({h, rows, cols}));
}
BENCHMARK(BM_DominantNoise)->Args({16, 8})->Args({64, 32})->Args({256, 128});

void BM_DominantChannel(benchmark::State &state)
{
    const auto rows = static_cast<std::size_t>(state.range(0)), cols = static_cast<std::size_t>(state.range(1));
    const auto h = channel_matrix(rows, cols, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(dominant_sq_singular_value({h, rows, cols}));
}
BENCHMARK(BM_DominantChannel)->Args({64, 32})->Args({256, 128});

void BM_FftDelayAxis(benchmark::State &state)
{
    const auto n_tap = static_cast<std::size_t>(state.range(0));
    CirSnapshot c;
    c.tensor = ComplexTensor3(16, 8, n_tap, random_matrix(16 * 8, n_tap, 3));
    for (auto _ : state)
        benchmark::DoNotOptimize(fft_delay_axis(c));
    state.SetItemsProcessed(state.iterations() * 16 * 8);
}
BENCHMARK(BM_FftDelayAxis)->Arg(256)->Arg(2048);

void BM_DeskSnapshotGains(benchmark::State &state)
{
    RandomSceneOptions opt;
    opt.ap_array = ApArray::desk_scale();
    const Scene scene = random_scene(4, opt);
    const SynthSettings st = SynthSettings::desk_scale();
    const DenoiseParams dn = DenoiseParams::for_tap_grid(st.n_tap, st.tap_spacing);
    std::vector<PanelConfig> configs{PanelConfig::full()};
    for (std::size_t p = 1; p <= 7; ++p)
    {
        configs.push_back(PanelConfig::forward(p));
        configs.push_back(PanelConfig::backward(p));
    }
    const CirSnapshot cir = synthesize_snapshot(scene, MobilityPattern{}, 5, 1e-3, 1, st);
    for (auto _ : state)
        benchmark::DoNotOptimize(snapshot_gains(CirSnapshot(cir), configs, st.layout, dn));
}
BENCHMARK(BM_DeskSnapshotGains)->Unit(benchmark::kMillisecond);

void BM_DeskSynthesis(benchmark::State &state)
{
    RandomSceneOptions opt;
    opt.ap_array = ApArray::desk_scale();
    const Scene scene = random_scene(4, opt);
    const SynthSettings st = SynthSettings::desk_scale();
    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize_snapshot(scene, MobilityPattern{}, 5, 1e-3, 1, st));
}
BENCHMARK(BM_DeskSynthesis)->Unit(benchmark::kMillisecond);

} // namespace
