#include "shortpath/rng.hpp"

#include <cmath>
#include <numbers>

namespace shortpath {

std::uint64_t CounterRng::below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    // Lemire's multiply-shift with rejection.
    for (;;) {
        const unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        const auto lo = static_cast<std::uint64_t>(m);
        if (lo >= (-bound) % bound) return static_cast<std::uint64_t>(m >> 64);
    }
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

}  // namespace shortpath
