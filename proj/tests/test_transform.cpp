#include <doctest.h>

#include <cmath>

#include "shortpath/error.hpp"
#include "shortpath/rng.hpp"
#include "shortpath/transform.hpp"

using namespace shortpath;

TEST_CASE("g_eta values") {
    CHECK(g_eta(0.5, -1.0) == -1.0);
    CHECK(g_eta(0.5, 0.0) == 0.0);
    CHECK(g_eta(0.5, -0.75) == doctest::Approx(-0.5));
    CHECK(g_eta(0.3, -(1 - 0.3)) == 0.0);
    CHECK_THROWS_AS(g_eta(0.0, -0.5), ParameterError);
    CHECK_THROWS_AS(g_eta(1.0, -0.5), ParameterError);
}

TEST_CASE("g_eta clamps inputs below -1 and counts them") {
    const auto before = g_eta_clamp_count();
    CHECK(g_eta(0.5, -1.0000001) == -1.0);
    CHECK(g_eta_clamp_count() == before + 1);
}

TEST_CASE("property: g_eta monotone and concave, f convex and monotone") {
    CounterRng rng(11, 0);
    for (int t = 0; t < 2000; ++t) {
        const double eta = 0.01 + 0.98 * rng.uniform();
        double a = -1 + 3 * rng.uniform(), b = -1 + 3 * rng.uniform();
        if (a > b) std::swap(a, b);
        const double lam = rng.uniform();
        const double mid = lam * a + (1 - lam) * b;
        CHECK(g_eta(eta, a) <= g_eta(eta, b));
        CHECK(g_eta(eta, mid) >= lam * g_eta(eta, a) + (1 - lam) * g_eta(eta, b) - 1e-12);
        const double x = 3 * rng.uniform() - 1, y = 3 * rng.uniform() - 1;
        const double lo = std::min(x, y), hi = std::max(x, y);
        const double fm = f_eta(eta, lam * lo + (1 - lam) * hi);
        CHECK(f_eta(eta, lo) <= f_eta(eta, hi));
        CHECK(fm <= lam * f_eta(eta, lo) + (1 - lam) * f_eta(eta, hi) + 1e-12);
        if (lo >= -1 && lo <= 1) CHECK(f_eta(eta, lo) == doctest::Approx(-g_eta(eta, -lo)));
    }
}

TEST_CASE("F") {
    CHECK(F(1.0) == 0.0);
    CHECK(F(0.0) == 1.0);
    double prev = F(1e-9);
    for (int i = 1; i <= 1000; ++i) {
        const double x = i / 1000.0;
        const double v = F(x);
        CHECK(v >= 0.0);
        CHECK(v <= prev + 1e-15);
        prev = v;
        if (x < 1.0) CHECK(F(1 - x) / x >= x / 2 - 1e-15);
    }
}

TEST_CASE("binary entropy and tau inverse") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(tau_inverse(1.0) == doctest::Approx(1.0));
    CHECK(tau_inverse(0.0) == 0.0);
    const double ln2 = std::log(2.0);
    for (int i = 0; i <= 10000; ++i) {
        const double y = i / 10000.0;
        CHECK(tau_inverse(y) >= 1 + (y - 1) / ln2 - 1e-12);
    }
}

TEST_CASE("gamma formulas and b_max") {
    const double g = gamma_kspin(3, 0.5);
    CHECK(g == doctest::Approx(3.99e-4).epsilon(2e-3));
    CHECK(b_max(g) == doctest::Approx(1.02e-4).epsilon(6e-3));
    CHECK(gamma_kspin(3, 1.0) == 0.0);
    CHECK(gamma_csp(3, 1.0, 1.0) == 0.0);
    const double ln2 = std::log(2.0);
    CHECK(gamma_csp(2, 1.0, 0.0) == doctest::Approx(1.0 / (2 * ln2 * 16 * 4)));
    CHECK(b_max(1.0) == doctest::Approx(0.2573).epsilon(1e-3));
    CHECK(b_max(0.0) == 0.0);
    for (int i = 0; i < 100; ++i) CHECK(b_max(i / 100.0) < 0.3);
}

TEST_CASE("high-precision mode agrees with binary64") {
    const HighPrecision eta("0.5");
    const HighPrecision g = gamma_kspin<HighPrecision>(3, eta);
    CHECK(static_cast<double>(g) == doctest::Approx(gamma_kspin(3, 0.5)).epsilon(1e-15));
    CHECK(static_cast<double>(b_max(g)) == doctest::Approx(b_max(gamma_kspin(3, 0.5))).epsilon(1e-15));
}

TEST_CASE("reparameterization") {
    const auto tp = reparameterize(2.0, 0.5, 0.5, 2.0);
    CHECK(tp.theta == doctest::Approx(0.5));
    CHECK(tp.phi == doctest::Approx(1.0));
    CounterRng rng(3, 0);
    for (int t = 0; t < 1000; ++t) {
        const double q = 1 + 9 * rng.uniform();
        const double w = q * (0.1 + 0.9 * rng.uniform());
        const double eta = 0.01 + 0.98 * rng.uniform();
        const double b = 0.99 * rng.uniform();
        const auto be = invert_reparameterization(reparameterize(w, eta, b, q), w, q);
        CHECK(be.eta == doctest::Approx(eta).epsilon(1e-12).scale(1.0));
        CHECK(be.b == doctest::Approx(b).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("property: which (b, eta) the (theta, phi) box reaches") {
    // The preimage of (b, eta) has theta in [0,1] always and phi = bQ/(eta|E*|), so it
    // lies in [0,1] x [0, Q/q] exactly when b <= eta |E*|/q.
    CounterRng rng(8, 0);
    const double q = 1.0, Q = 4.0;
    int inside = 0, outside = 0;
    for (int t = 0; t < 4000; ++t) {
        const double estar = q + (Q - q) * rng.uniform();
        const double eta = 0.001 + 0.998 * rng.uniform(), b = rng.uniform();
        const auto tp = reparameterize(estar, eta, b, Q);
        CHECK(tp.theta >= 0.0);
        CHECK(tp.theta <= 1.0);
        const bool in_box = tp.phi <= Q / q;
        CHECK(in_box == (b <= eta * estar / q));
        (in_box ? inside : outside)++;
        const auto be = invert_reparameterization(tp, estar, Q);
        CHECK(be.b == doctest::Approx(b).epsilon(1e-9).scale(1.0));
        CHECK(be.eta == doctest::Approx(eta).epsilon(1e-9).scale(1.0));
    }
    CHECK(inside > 0);
    CHECK(outside > 0);
}
