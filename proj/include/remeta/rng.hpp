#pragma once

#include <cstdint>

namespace remeta {

/// Seedable stream of pseudo-random variates.
///
/// The generator is SplitMix64 (Steele, Lea & Flood, "Fast splittable
/// pseudorandom number generators", OOPSLA 2014). The initial state is a hash of
/// (seed, stream_id), so independent streams can be derived from coordinates
/// without any coordination. Identical (seed, stream_id) pairs reproduce the
/// same sequence. A stream has a single owner; never share one across threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1), 53 bits of resolution.
    double next_uniform() noexcept;

    /// Standard normal variate by inverse-CDF transform of next_uniform().
    double next_std_normal();

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t state_;
};

/// One N(mean, sd^2) variate. sd == 0 returns mean exactly (and still advances
/// the stream). Throws DomainError for sd < 0.
double draw_normal(RngStream& stream, double mean, double sd);

/// Stateless 64-bit finalizer used for stream derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Folds a coordinate into a running stream id.
std::uint64_t combine_stream_id(std::uint64_t id, std::uint64_t coordinate) noexcept;

}  // namespace remeta
