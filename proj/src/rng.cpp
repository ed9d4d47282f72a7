#include "remeta/rng.hpp"

#include <cmath>

#include "remeta/errors.hpp"
#include "remeta/stats_kernel.hpp"

namespace remeta {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t combine_stream_id(std::uint64_t id, std::uint64_t coordinate) noexcept {
    return mix64(id + kGolden + mix64(coordinate));
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id), state_(mix64(mix64(seed + kGolden) ^ stream_id) + stream_id) {}

std::uint64_t RngStream::next_u64() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

double RngStream::next_uniform() noexcept {
    // Midpoints of the 2^53 equal cells: never 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_std_normal() {
    return stats::std_normal_quantile(next_uniform());
}

double draw_normal(RngStream& stream, double mean, double sd) {
    if (!(sd >= 0.0)) throw DomainError("draw_normal: sd must be non-negative");
    const double z = stream.next_std_normal();
    if (sd == 0.0) return mean;
    return mean + sd * z;
}

}  // namespace remeta
