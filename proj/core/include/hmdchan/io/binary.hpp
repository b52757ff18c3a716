#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmdchan::io
{

// Malformed container; offset is the byte position where decoding failed.
class FormatError : public std::runtime_error
{
public:
    FormatError(const std::string &what, std::size_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), detail_(what),
          offset_(offset)
    {
    }
    std::size_t offset() const noexcept { return offset_; }
    // Message without the offset suffix.
    const std::string &detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t offset_;
};

// Little-endian encoder.
class ByteWriter
{
public:
    void u8(std::uint8_t v) { bytes_.push_back(static_cast<std::byte>(v)); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f32(float v);
    void f64(double v);
    void raw(std::span<const std::byte> b)
    {
        for (std::byte x : b)
            bytes_.push_back(x);
    }
    void reserve(std::size_t n) { bytes_.reserve(n); }

    const std::vector<std::byte> &bytes() const noexcept { return bytes_; }
    std::vector<std::byte> take() && { return std::move(bytes_); }

private:
    std::vector<std::byte> bytes_;
};

// Little-endian decoder with bounds checks.
class ByteReader
{
public:
    explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    float f32();
    double f64();
    std::span<const std::byte> raw(std::size_t n);

    std::size_t offset() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    void need(std::size_t n, const char *what) const;
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

// a * b, or false on size_t overflow.
inline bool checked_mul(std::size_t a, std::size_t b, std::size_t &out) noexcept
{
    if (a != 0 && b > static_cast<std::size_t>(-1) / a)
        return false;
    out = a * b;
    return true;
}

std::vector<std::byte> read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::byte> bytes);
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace hmdchan::io
