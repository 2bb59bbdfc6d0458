#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace ttsketch {

/// Counter-based random stream. Every draw is a pure function of
/// (seed, stream index, counter), so streams can be split and replayed
/// without shared state.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t stream() const { return stream_; }
    [[nodiscard]] std::uint64_t key() const { return key_; }
    [[nodiscard]] std::uint64_t position() const { return counter_; }

    /// Independent child stream; the parent's position is irrelevant.
    [[nodiscard]] RngStream substream(std::uint64_t index) const;

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double next_uniform();
    /// Uniform integer in [0, bound).
    std::size_t next_below(std::size_t bound);
    double next_gaussian();

    /// Standard normal draw number `counter` of this stream, without advancing.
    [[nodiscard]] double gaussian_at(std::uint64_t counter) const;

private:
    RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t key);

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Bijective 64-bit finalizer (splitmix64).
[[nodiscard]] std::uint64_t mix64(std::uint64_t z);

/// Raw 64 random bits for (key, counter).
[[nodiscard]] std::uint64_t counter_bits(std::uint64_t key, std::uint64_t counter);

/// Standard normal deviate for (key, counter), Box–Muller over two counter draws.
[[nodiscard]] double counter_gaussian(std::uint64_t key, std::uint64_t counter);

/// Incremental hash of a multi-index prefix: hash(p, i) from hash(p) and i.
/// The empty prefix hashes to zero.
[[nodiscard]] std::uint64_t extend_prefix_hash(std::uint64_t prefixHash, std::size_t index);
[[nodiscard]] std::uint64_t prefix_hash(std::span<const std::size_t> index);

/// Gaussian random field g[k, μ] addressed by a row index k and the hash of
/// a multi-index μ. Sketch tensors of the randomized decompositions are drawn
/// from such fields so that any subset of entries can be generated on demand
/// and still match a full dense draw bit for bit.
class GaussianField {
public:
    explicit GaussianField(const RngStream& rng) : key_(rng.key()) {}

    /// Key for row k; value(k, h) == counter_gaussian(row_key(k), h).
    [[nodiscard]] std::uint64_t row_key(std::size_t k) const;
    [[nodiscard]] double value(std::size_t k, std::uint64_t indexHash) const;

private:
    std::uint64_t key_;
};

}  // namespace ttsketch
