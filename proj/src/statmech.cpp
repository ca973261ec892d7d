#include "shortpath/statmech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shortpath/error.hpp"
#include "shortpath/transform.hpp"

namespace shortpath {

CumulativeStateFunction::CumulativeStateFunction(std::vector<Breakpoint> breakpoints) {
    if (breakpoints.empty()) throw ParameterError("cumulative state function needs a breakpoint");
    std::sort(breakpoints.begin(), breakpoints.end(),
              [](const Breakpoint& a, const Breakpoint& b) { return a.energy < b.energy; });
    for (const auto& b : breakpoints) {
        if (!(b.step > 0.0) || !std::isfinite(b.step) || !std::isfinite(b.energy))
            throw ParameterError("breakpoints need finite energies and positive finite steps");
        if (!bps_.empty() && bps_.back().energy == b.energy)
            bps_.back().step += b.step;
        else
            bps_.push_back(b);
        total_ += b.step;
    }
}

CumulativeStateFunction CumulativeStateFunction::from_spectrum(const SpectrumTable& table) {
    std::vector<Breakpoint> bps;
    for (const auto& l : table.levels) bps.push_back({l.energy, static_cast<double>(l.multiplicity)});
    return CumulativeStateFunction(std::move(bps));
}

CumulativeStateFunction CumulativeStateFunction::eta_transformed(const SpectrumTable& table, double eta) {
    const double scale = std::abs(table.e_star);
    std::vector<Breakpoint> bps;
    for (const auto& l : table.levels)
        bps.push_back({g_eta(eta, l.energy / scale), static_cast<double>(l.multiplicity)});
    return CumulativeStateFunction(std::move(bps));
}

CumulativeStateFunction CumulativeStateFunction::two_band(int n, double gamma) {
    return CumulativeStateFunction({{-1.0, std::exp2((1.0 - gamma) * n)}, {0.0, std::exp2(n)}});
}

double CumulativeStateFunction::operator()(double e) const {
    double c = 0.0;
    for (const auto& b : bps_) {
        if (b.energy > e) break;
        c += b.step;
    }
    return c;
}

CumulativeStateFunction CumulativeStateFunction::negated() const {
    std::vector<Breakpoint> bps;
    for (const auto& b : bps_) bps.push_back({-b.energy, b.step});
    return CumulativeStateFunction(std::move(bps));
}

namespace {

// Log-sum-exp over the breakpoints.
Gibbs gibbs_nonnegative(const CumulativeStateFunction& cs, double beta) {
    const auto& bps = cs.breakpoints();
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& b : bps) shift = std::max(shift, std::log(b.step) - beta * b.energy);
    double sum = 0.0, esum = 0.0;
    for (const auto& b : bps) {
        const double w = std::exp(std::log(b.step) - beta * b.energy - shift);
        sum += w;
        esum += w * b.energy;
    }
    Gibbs g;
    g.log_z = shift + std::log(sum);
    g.z = std::exp(g.log_z);
    g.u = esum / sum;
    g.s = (g.log_z + beta * g.u) / std::numbers::ln2;
    return g;
}

}  // namespace

Gibbs gibbs(const CumulativeStateFunction& cs, double beta) {
    if (beta >= 0.0) return gibbs_nonnegative(cs, beta);
    // The primed system with negated energies at -beta has the same Z and S
    // and the opposite mean energy.
    Gibbs g = gibbs_nonnegative(cs.negated(), -beta);
    g.u = -g.u;
    return g;
}

double solve_beta_for_U(const CumulativeStateFunction& cs, double target, double tol) {
    if (!(target > cs.e_min() && target < cs.e_max()))
        throw NoSolution("target mean energy lies outside (E_min, E_max)");
    double lo = -1.0, hi = 1.0;
    while (gibbs(cs, hi).u > target) {
        hi *= 2.0;
        if (hi > 1e300) throw NoSolution("cannot bracket beta");
    }
    while (gibbs(cs, lo).u < target) {
        lo *= 2.0;
        if (lo < -1e300) throw NoSolution("cannot bracket beta");
    }
    // U is decreasing in beta: U(lo) >= target >= U(hi).
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (gibbs(cs, mid).u > target)
            lo = mid;
        else
            hi = mid;
    }
    const double ul = gibbs(cs, lo).u, uh = gibbs(cs, hi).u;
    const double beta = std::abs(ul - target) <= std::abs(uh - target) ? lo : hi;
    const double err = std::abs(gibbs(cs, beta).u - target);
    if (err > tol) throw NoSolution("bisection stalled at |U - target| = " + std::to_string(err));
    return beta;
}

double entropy_at(const CumulativeStateFunction& cs, double target) {
    return gibbs(cs, solve_beta_for_U(cs, target)).s;
}

double max_entropy_bound(int n, double gamma, double u) {
    if (!(u >= -1.0 && u <= 0.0)) throw ParameterError("U must lie in [-1, 0]");
    return n * (1.0 + gamma * u) + binary_entropy(-u);
}

double max_entropy_bound_simplified(int n, double gamma, double u) {
    return n * (1.0 + gamma * u) + 1.0;
}

DominanceCheck entropy_dominates(const CumulativeStateFunction& cs1,
                                 const CumulativeStateFunction& cs2, double u) {
    DominanceCheck r;
    std::vector<double> points;
    for (const auto& b : cs1.breakpoints()) points.push_back(b.energy);
    for (const auto& b : cs2.breakpoints()) points.push_back(b.energy);
    std::sort(points.begin(), points.end());
    const double slack = 1e-12 * std::max(cs1.total(), cs2.total());
    if (cs1.total() + slack < cs2.total()) {
        r.reason = "C1(inf) < C2(inf)";
        return r;
    }
    for (double e : points) {
        const double c1 = cs1(e), c2 = cs2(e);
        if (c1 + slack < c2) {
            r.reason = "C1 < C2 at E=" + std::to_string(e);
            return r;
        }
        if ((cs1.total() - c1) + slack < (cs2.total() - c2)) {
            r.reason = "upper tail of C1 below C2 at E=" + std::to_string(e);
            return r;
        }
    }
    r.applicable = true;
    r.s1 = entropy_at(cs1, u);
    r.s2 = entropy_at(cs2, u);
    r.dominates = r.s1 >= r.s2 - 1e-9 * std::max(1.0, std::abs(r.s2));
    return r;
}

}  // namespace shortpath
