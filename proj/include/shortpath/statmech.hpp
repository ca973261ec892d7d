#pragma once

#include <string>
#include <vector>

#include "shortpath/cost.hpp"

namespace shortpath {

struct Breakpoint {
    double energy = 0.0;
    double step = 0.0;
};

/// Monotone step function C(E) with finitely many jumps. Steps need not be
/// integers.
class CumulativeStateFunction {
public:
    /// Sorts by energy and merges equal energies; every step must be positive.
    explicit CumulativeStateFunction(std::vector<Breakpoint> breakpoints);

    static CumulativeStateFunction from_spectrum(const SpectrumTable& table);
    /// States of g_eta(H/|E*|) built from a spectrum table.
    static CumulativeStateFunction eta_transformed(const SpectrumTable& table, double eta);
    /// 2^{(1-gamma)n} states at -1 and 2^n states at 0.
    static CumulativeStateFunction two_band(int n, double gamma);

    const std::vector<Breakpoint>& breakpoints() const { return bps_; }
    double total() const { return total_; }
    double e_min() const { return bps_.front().energy; }
    double e_max() const { return bps_.back().energy; }
    double operator()(double e) const;
    CumulativeStateFunction negated() const;

private:
    std::vector<Breakpoint> bps_;
    double total_ = 0.0;
};

struct Gibbs {
    double log_z = 0.0;
    double z = 0.0;  ///< may overflow to inf; log_z stays finite
    double u = 0.0;
    double s = 0.0;  ///< bits
};

/// Z = sum_j step_j e^{-beta E_j}, U = <E>, S = (ln Z + beta U)/ln 2.
Gibbs gibbs(const CumulativeStateFunction& cs, double beta);

/// Root of U(beta) = target by bisection; |U - target| <= tol on return.
double solve_beta_for_U(const CumulativeStateFunction& cs, double target, double tol = 1e-13);

/// Maximum entropy at mean energy U (E_min < U < E_max).
double entropy_at(const CumulativeStateFunction& cs, double target);

/// n(1 + gamma U) + H2(-U).
double max_entropy_bound(int n, double gamma, double u);
/// n(1 + gamma U) + 1, the form with H2 bounded by one.
double max_entropy_bound_simplified(int n, double gamma, double u);

struct DominanceCheck {
    bool applicable = false;  ///< hypotheses of the comparison hold
    bool dominates = false;   ///< S1 >= S2 (within 1e-9 relative)
    double s1 = 0.0;
    double s2 = 0.0;
    std::string reason;
};

/// Checks C1 >= C2 and C1(inf) - C1 >= C2(inf) - C2 at every breakpoint, then
/// compares the maximum entropies at mean energy U.
DominanceCheck entropy_dominates(const CumulativeStateFunction& cs1,
                                 const CumulativeStateFunction& cs2, double u);

}  // namespace shortpath
