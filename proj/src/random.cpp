#include "ttsketch/random.hpp"

#include <cmath>
#include <numbers>

namespace ttsketch {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kChildSalt = 0x8CB92BA72F3D8DD7ULL;
constexpr std::uint64_t kRowSalt = 0xAEF17502108EF2D9ULL;

double to_open_unit(std::uint64_t bits)
{
    // 53 random bits centred in their bucket: never exactly 0 or 1.
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive(std::uint64_t key, std::uint64_t index, std::uint64_t salt)
{
    return mix64(key ^ mix64(index * kGolden + salt));
}

}  // namespace

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter)
{
    return mix64(key ^ mix64((counter + 1) * kGolden));
}

double counter_gaussian(std::uint64_t key, std::uint64_t counter)
{
    const double u1 = to_open_unit(counter_bits(key, 2 * counter));
    const double u2 = to_open_unit(counter_bits(key, 2 * counter + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t extend_prefix_hash(std::uint64_t prefixHash, std::size_t index)
{
    return mix64(prefixHash + (static_cast<std::uint64_t>(index) + 1) * kGolden);
}

std::uint64_t prefix_hash(std::span<const std::size_t> index)
{
    std::uint64_t h = 0;
    for (std::size_t i : index) {
        h = extend_prefix_hash(h, i);
    }
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : RngStream(seed, stream, derive(mix64(seed + kGolden), stream, kStreamSalt))
{
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t key)
    : seed_(seed), stream_(stream), key_(key)
{
}

RngStream RngStream::substream(std::uint64_t index) const
{
    return RngStream(seed_, stream_, derive(key_, index, kChildSalt));
}

std::uint64_t RngStream::next_u64()
{
    return counter_bits(key_, counter_++);
}

double RngStream::next_uniform()
{
    return to_open_unit(next_u64());
}

std::size_t RngStream::next_below(std::size_t bound)
{
    const auto wide = static_cast<unsigned __int128>(next_u64()) * bound;
    return static_cast<std::size_t>(wide >> 64);
}

double RngStream::next_gaussian()
{
    return gaussian_at(counter_++);
}

double RngStream::gaussian_at(std::uint64_t counter) const
{
    return counter_gaussian(key_, counter);
}

std::uint64_t GaussianField::row_key(std::size_t k) const
{
    return derive(key_, k, kRowSalt);
}

double GaussianField::value(std::size_t k, std::uint64_t indexHash) const
{
    return counter_gaussian(row_key(k), indexHash);
}

}  // namespace ttsketch
