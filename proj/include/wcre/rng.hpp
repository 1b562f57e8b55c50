#pragma once

#include <cstdint>

namespace wcre {

std::uint64_t mix64(std::uint64_t x) noexcept;

// Counter-based generator: draw k of stream s under seed is a pure function of
// (seed, s, k), so results do not depend on scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    double uniform() noexcept;  // open interval (0, 1)
    double normal();
    std::uint64_t below(std::uint64_t n) noexcept;  // uniform on {0, ..., n-1}

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace wcre
