#include "wcre/rng.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>

namespace wcre {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL))) {}

std::uint64_t CounterRng::next_u64() noexcept {
    return mix64(key_ ^ mix64(counter_++));
}

double CounterRng::uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    // inverse-cdf keeps one draw per variate
    const double u = uniform();
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
    // Lemire's multiply-shift; the bias is below 2^-64 * n and irrelevant here
    const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace wcre
