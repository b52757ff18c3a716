#include "hmdchan/spectral.hpp"
#include "hmdchan/parallel.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace hmdchan
{

namespace
{

struct PlanDeleter
{
    void operator()(fftw_plan_s *p) const noexcept { fftw_destroy_plan(p); }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are cached per length and created under a lock.
fftw_plan plan_for(std::size_t n)
{
    static std::mutex mtx;
    static std::map<std::size_t, PlanPtr> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second.get();

    std::vector<cplx> scratch(n);
    auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (p == nullptr)
        throw std::runtime_error("fftw: failed to create plan of length " + std::to_string(n));
    return cache.emplace(n, PlanPtr(p)).first->second.get();
}

void transform_pairs(ComplexTensor3 &t)
{
    const std::size_t n = t.n_tap();
    fftw_plan p = plan_for(n);
    const auto pairs = static_cast<std::ptrdiff_t>(t.n_rx() * t.n_tx());
    cplx *base = t.data().data();
#pragma omp parallel for schedule(static) num_threads(worker_threads())
    for (std::ptrdiff_t q = 0; q < pairs; ++q)
    {
        auto *buf = reinterpret_cast<fftw_complex *>(base + static_cast<std::size_t>(q) * n);
        fftw_execute_dft(p, buf, buf);
    }
}

} // namespace

void fft_inplace(std::span<cplx> x)
{
    if (x.empty())
        return;
    auto *buf = reinterpret_cast<fftw_complex *>(x.data());
    fftw_execute_dft(plan_for(x.size()), buf, buf);
}

CtfSnapshot fft_delay_axis(const CirSnapshot &cir, std::size_t n_points)
{
    const auto &h = cir.tensor;
    if (n_points == 0)
        n_points = h.n_tap();
    if (n_points < h.n_tap())
        throw std::invalid_argument("fft_delay_axis: n_points (" + std::to_string(n_points) +
                                    ") is smaller than the number of taps (" + std::to_string(h.n_tap()) + ")");
    if (!h.all_finite())
        throw std::invalid_argument("fft_delay_axis: non-finite CIR sample");

    ComplexTensor3 out(h.n_rx(), h.n_tx(), n_points);
    for (std::size_t r = 0; r < h.n_rx(); ++r)
        for (std::size_t t = 0; t < h.n_tx(); ++t)
        {
            auto src = h.pair(r, t);
            std::copy(src.begin(), src.end(), out.pair(r, t).begin());
        }
    if (n_points > 0)
        transform_pairs(out);
    return CtfSnapshot{std::move(out), cir.key};
}

CtfSnapshot fft_delay_axis(CirSnapshot &&cir)
{
    if (!cir.tensor.all_finite())
        throw std::invalid_argument("fft_delay_axis: non-finite CIR sample");
    if (cir.tensor.n_tap() > 0)
        transform_pairs(cir.tensor);
    return CtfSnapshot{std::move(cir.tensor), cir.key};
}

} // namespace hmdchan
