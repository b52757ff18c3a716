#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hmdchan
{

using cplx = std::complex<double>;

// Dense complex tensor indexed (rx, tx, tap). Row-major: the tap index is
// contiguous, then tx, then rx.
class ComplexTensor3
{
public:
    ComplexTensor3() = default;
    ComplexTensor3(std::size_t n_rx, std::size_t n_tx, std::size_t n_tap);
    ComplexTensor3(std::size_t n_rx, std::size_t n_tx, std::size_t n_tap, std::vector<cplx> data);

    std::size_t n_rx() const noexcept { return n_rx_; }
    std::size_t n_tx() const noexcept { return n_tx_; }
    std::size_t n_tap() const noexcept { return n_tap_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(std::size_t rx, std::size_t tx, std::size_t tap) const noexcept
    {
        return (rx * n_tx_ + tx) * n_tap_ + tap;
    }

    cplx &operator()(std::size_t rx, std::size_t tx, std::size_t tap) noexcept { return data_[index(rx, tx, tap)]; }
    const cplx &operator()(std::size_t rx, std::size_t tx, std::size_t tap) const noexcept
    {
        return data_[index(rx, tx, tap)];
    }

    // All taps of one antenna pair.
    std::span<cplx> pair(std::size_t rx, std::size_t tx) noexcept { return {data_.data() + index(rx, tx, 0), n_tap_}; }
    std::span<const cplx> pair(std::size_t rx, std::size_t tx) const noexcept
    {
        return {data_.data() + index(rx, tx, 0), n_tap_};
    }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    // Copies the n_rx x n_tx matrix at one tap (row-major) into out.
    void tap_matrix(std::size_t tap, std::span<cplx> out) const;
    void zero_tap(std::size_t tap) noexcept;

    bool all_finite() const noexcept;
    bool same_shape(const ComplexTensor3 &other) const noexcept
    {
        return n_rx_ == other.n_rx_ && n_tx_ == other.n_tx_ && n_tap_ == other.n_tap_;
    }

    friend bool operator==(const ComplexTensor3 &, const ComplexTensor3 &) = default;

private:
    std::size_t n_rx_ = 0;
    std::size_t n_tx_ = 0;
    std::size_t n_tap_ = 0;
    std::vector<cplx> data_;
};

enum class Scenario : std::uint8_t
{
    LOS = 0,
    NLOS = 1,
};

std::string_view to_string(Scenario s) noexcept;
Scenario scenario_from_string(std::string_view s);

// Identifies one snapshot: position u, scenario s, snapshot index i.
struct MeasurementKey
{
    std::uint32_t position = 0;
    Scenario scenario = Scenario::LOS;
    std::uint32_t snapshot = 0;

    friend auto operator<=>(const MeasurementKey &, const MeasurementKey &) = default;
};

inline constexpr double default_tap_spacing_s = 1.3e-9;
inline constexpr std::uint32_t default_snapshots_per_measurement = 33;

// Delay-domain MIMO snapshot h(tau).
struct CirSnapshot
{
    ComplexTensor3 tensor;
    double tap_spacing = default_tap_spacing_s;
    MeasurementKey key;

    double max_delay() const noexcept { return static_cast<double>(tensor.n_tap()) * tap_spacing; }
    void validate() const;
};

// Frequency-domain snapshot H[k]; the third tensor axis is the subcarrier.
struct CtfSnapshot
{
    ComplexTensor3 tensor;
    MeasurementKey key;

    std::size_t n_subcarriers() const noexcept { return tensor.n_tap(); }
};

} // namespace hmdchan
