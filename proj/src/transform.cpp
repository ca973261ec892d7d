#include "shortpath/transform.hpp"

#include <atomic>

namespace shortpath {

namespace {
std::atomic<std::uint64_t> clamp_counter{0};
}

void detail::note_clamp() { clamp_counter.fetch_add(1, std::memory_order_relaxed); }

std::uint64_t g_eta_clamp_count() { return clamp_counter.load(std::memory_order_relaxed); }

ThetaPhi reparameterize(double w, double eta, double b, double q) {
    check_eta(eta);
    if (!(b >= 0.0 && b < 1.0)) throw ParameterError("b must lie in [0,1)");
    if (!(w > 0.0 && w <= q)) throw ParameterError("W must lie in (0, Q]");
    return {w * (1.0 - eta) / q, b * q / (eta * w)};
}

BEta invert_reparameterization(const ThetaPhi& tp, double abs_estar, double q) {
    if (!(abs_estar > 0.0 && q > 0.0)) throw ParameterError("|E*| and Q must be positive");
    return {(abs_estar / q) * tp.phi - tp.phi * tp.theta, 1.0 - q * tp.theta / abs_estar};
}

}  // namespace shortpath
