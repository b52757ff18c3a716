#include "hmdchan/io/binary.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

namespace hmdchan::io
{

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

namespace
{

template <class T>
void put_le(std::vector<std::byte> &out, T v)
{
    std::byte b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(b), std::end(b));
    out.insert(out.end(), std::begin(b), std::end(b));
}

template <class T>
T get_le(const std::byte *p)
{
    std::byte b[sizeof(T)];
    std::memcpy(b, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(std::begin(b), std::end(b));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

} // namespace

void ByteWriter::u32(std::uint32_t v) { put_le(bytes_, v); }
void ByteWriter::u64(std::uint64_t v) { put_le(bytes_, v); }
void ByteWriter::f32(float v) { put_le(bytes_, v); }
void ByteWriter::f64(double v) { put_le(bytes_, v); }

void ByteReader::need(std::size_t n, const char *what) const
{
    if (remaining() < n)
        throw FormatError(std::string("truncated input reading ") + what + ": need " + std::to_string(n) +
                              " byte(s), " + std::to_string(remaining()) + " left",
                          pos_);
}

std::uint8_t ByteReader::u8()
{
    need(1, "u8");
    return static_cast<std::uint8_t>(bytes_[pos_++]);
}

std::uint32_t ByteReader::u32()
{
    need(4, "u32");
    const auto v = get_le<std::uint32_t>(bytes_.data() + pos_);
    pos_ += 4;
    return v;
}

std::uint64_t ByteReader::u64()
{
    need(8, "u64");
    const auto v = get_le<std::uint64_t>(bytes_.data() + pos_);
    pos_ += 8;
    return v;
}

float ByteReader::f32()
{
    need(4, "f32");
    const auto v = get_le<float>(bytes_.data() + pos_);
    pos_ += 4;
    return v;
}

double ByteReader::f64()
{
    need(8, "f64");
    const auto v = get_le<double>(bytes_.data() + pos_);
    pos_ += 8;
    return v;
}

std::span<const std::byte> ByteReader::raw(std::size_t n)
{
    need(n, "bytes");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
}

std::vector<std::byte> read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    const auto size = static_cast<std::size_t>(in.tellg());
    std::vector<std::byte> bytes(size);
    in.seekg(0);
    if (size > 0 && !in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(size)))
        throw std::runtime_error("read error on '" + path.string() + "'");
    return bytes;
}

void write_file(const std::filesystem::path &path, std::span<const std::byte> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("write error on '" + path.string() + "'");
}

void write_text_file(const std::filesystem::path &path, const std::string &text)
{
    write_file(path, std::as_bytes(std::span(text.data(), text.size())));
}

} // namespace hmdchan::io
