#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "shortpath/error.hpp"

namespace shortpath {

/// Fifty-digit float for checking quoted constants.
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

namespace detail {
void note_clamp();
}

/// Number of g_eta inputs below -1 that were clamped since process start.
std::uint64_t g_eta_clamp_count();

template <class T>
void check_eta(const T& eta) {
    if (!(eta > 0 && eta < 1)) throw ParameterError("eta must lie in (0,1)");
}

/// g_eta(x) = min(0, (x + 1 - eta)/eta), with x < -1 clamped to -1.
template <class T>
T g_eta(const T& eta, T x) {
    check_eta(eta);
    if (x < -1) {
        detail::note_clamp();
        x = -1;
    }
    const T v = (x + 1 - eta) / eta;
    return v < 0 ? v : T(0);
}

/// f(x) = -g_eta(-x) = max(0, (x - 1 + eta)/eta).
template <class T>
T f_eta(const T& eta, const T& x) {
    check_eta(eta);
    const T v = (x - 1 + eta) / eta;
    return v > 0 ? v : T(0);
}

/// F(x) = 1 - x + x ln x, F(0) = 1.
template <class T>
T F(const T& x) {
    using std::log;
    if (x == 0) return T(1);
    return 1 - x + x * log(x);
}

template <class T>
T binary_entropy(const T& q) {
    using std::log;
    if (q <= 0 || q >= 1) return T(0);
    const T ln2 = boost::math::constants::ln_two<T>();
    return -(q * log(q) + (1 - q) * log(1 - q)) / ln2;
}

/// tau^{-1}(y) = H2(1/2 - sqrt(1 - y^2)/2).
template <class T>
T tau_inverse(const T& y) {
    using std::sqrt;
    T r = 1 - y * y;
    if (r < 0) r = 0;
    return binary_entropy<T>(T(0.5) - sqrt(r) / 2);
}

/// Tail exponent for MAX-k-CSP with ratio = |E*|/m.
template <class T>
T gamma_csp(int k, const T& ratio, const T& eta) {
    using std::ldexp;
    if (k < 1) throw ParameterError("k must be positive");
    const T ln2 = boost::math::constants::ln_two<T>();
    const T one_minus = 1 - eta;
    return ratio * ratio * one_minus * one_minus / (2 * ln2 * ldexp(T(1), 2 * k) * k * k);
}

/// Tail exponent for the k-spin ensemble.
template <class T>
T gamma_kspin(int k, const T& eta) {
    if (k < 1) throw ParameterError("k must be positive");
    const T ln2 = boost::math::constants::ln_two<T>();
    const T pi = boost::math::constants::pi<T>();
    const T one_minus = 1 - eta;
    return one_minus * one_minus / (32 * pi * ln2 * k * k);
}

/// Largest b for which a gamma tail bound yields the spectral conditions.
template <class T>
T b_max(const T& gamma) {
    const T ln2 = boost::math::constants::ln_two<T>();
    return ln2 * gamma / (2 + ln2);
}

struct ThetaPhi {
    double theta = 0.0;
    double phi = 0.0;
};

struct BEta {
    double b = 0.0;
    double eta = 0.0;
};

/// (W, eta', b') -> (theta, phi) for an energy scale Q >= W.
ThetaPhi reparameterize(double w, double eta, double b, double q);

/// (theta, phi) -> (b, eta) given the true |E*|.
BEta invert_reparameterization(const ThetaPhi& tp, double abs_estar, double q);

}  // namespace shortpath
