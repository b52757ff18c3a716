#include "hmdchan/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hmdchan
{

ComplexTensor3::ComplexTensor3(std::size_t n_rx, std::size_t n_tx, std::size_t n_tap)
    : n_rx_(n_rx), n_tx_(n_tx), n_tap_(n_tap), data_(n_rx * n_tx * n_tap)
{
}

ComplexTensor3::ComplexTensor3(std::size_t n_rx, std::size_t n_tx, std::size_t n_tap, std::vector<cplx> data)
    : n_rx_(n_rx), n_tx_(n_tx), n_tap_(n_tap), data_(std::move(data))
{
    if (data_.size() != n_rx * n_tx * n_tap)
        throw std::invalid_argument("ComplexTensor3: data length " + std::to_string(data_.size()) +
                                    " does not match dimensions " + std::to_string(n_rx) + "x" +
                                    std::to_string(n_tx) + "x" + std::to_string(n_tap));
}

void ComplexTensor3::tap_matrix(std::size_t tap, std::span<cplx> out) const
{
    if (tap >= n_tap_)
        throw std::out_of_range("ComplexTensor3::tap_matrix: tap index out of range");
    if (out.size() != n_rx_ * n_tx_)
        throw std::invalid_argument("ComplexTensor3::tap_matrix: output size mismatch");
    std::size_t o = 0;
    for (std::size_t p = 0; p < n_rx_ * n_tx_; ++p)
        out[o++] = data_[p * n_tap_ + tap];
}

void ComplexTensor3::zero_tap(std::size_t tap) noexcept
{
    for (std::size_t p = 0; p < n_rx_ * n_tx_; ++p)
        data_[p * n_tap_ + tap] = cplx{};
}

bool ComplexTensor3::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

std::string_view to_string(Scenario s) noexcept
{
    return s == Scenario::LOS ? "LOS" : "NLOS";
}

Scenario scenario_from_string(std::string_view s)
{
    if (s == "LOS" || s == "los")
        return Scenario::LOS;
    if (s == "NLOS" || s == "nlos")
        return Scenario::NLOS;
    throw std::invalid_argument("unknown scenario tag '" + std::string(s) + "' (expected LOS or NLOS)");
}

void CirSnapshot::validate() const
{
    if (!(tap_spacing > 0.0) || !std::isfinite(tap_spacing))
        throw std::invalid_argument("CirSnapshot: tap_spacing must be positive and finite");
    if (tensor.empty())
        throw std::invalid_argument("CirSnapshot: empty tensor");
    if (!tensor.all_finite())
        throw std::invalid_argument("CirSnapshot: non-finite sample");
}

} // namespace hmdchan
