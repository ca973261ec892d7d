#pragma once

// Independent reference implementations used only by the tests. Everything
// here works directly from definitions (spin products, explicit matrices)
// and shares no code paths with the library beyond plain data types.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "shortpath/cost.hpp"

namespace oracle {

inline int spin(std::uint64_t z, int i) { return ((z >> i) & 1U) ? -1 : 1; }

inline double poly_value(const shortpath::PolyCost& c, std::uint64_t z) {
    double h = 0.0;
    for (const auto& t : c.terms()) {
        int p = 1;
        for (int v : t.vars) p *= spin(z, v);
        h += t.coeff * p;
    }
    return h;
}

inline std::vector<double> poly_values(const shortpath::PolyCost& c) {
    std::vector<double> v(std::size_t{1} << c.n());
    for (std::size_t z = 0; z < v.size(); ++z) v[z] = poly_value(c, z);
    return v;
}

inline double g(double eta, double x) {
    if (x < -1) x = -1;
    return std::min(0.0, (x + 1 - eta) / eta);
}

/// Explicit H_b = -X/n + b g(H/|E*|).
inline Eigen::MatrixXd hb_matrix(int n, const std::vector<double>& values, double eta, double b) {
    const std::size_t dim = values.size();
    double e_star = values[0];
    for (double v : values) e_star = std::min(e_star, v);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t z = 0; z < dim; ++z) {
        m(z, z) = b * g(eta, values[z] / std::abs(e_star));
        for (int i = 0; i < n; ++i) m(z, z ^ (std::size_t{1} << i)) -= 1.0 / n;
    }
    return m;
}

inline std::vector<double> plus(std::size_t dim) {
    return std::vector<double>(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
}

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace oracle
