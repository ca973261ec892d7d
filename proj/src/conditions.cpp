#include "shortpath/conditions.hpp"

#include <cmath>
#include <limits>

#include "shortpath/error.hpp"

namespace shortpath {

namespace {

ConditionVerdict banded(double margin, double tol) {
    const double band = 10.0 * tol;
    if (margin > band) return {Verdict::Pass, margin};
    if (margin < -band) return {Verdict::Fail, margin};
    return {Verdict::Marginal, margin};
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Marginal: return "marginal";
        case Verdict::Fail: return "fail";
    }
    return "?";
}

ConditionVerdict check_large_excited_energy(const SpectralSummary& s) {
    const double margin = s.e_excited - (-1.0 + 1.0 / s.n);
    if (s.degenerate) return {Verdict::Fail, margin};
    return banded(margin, s.tol);
}

ConditionVerdict check_small_ground_energy_shift(double e_b, int n, double tol) {
    const double floor = -1.0 - 1.0 / (static_cast<double>(n) * n * n);
    const double lower = e_b - floor;
    const double upper = -1.0 - e_b;
    const double margin = std::min(lower, upper);
    if (lower >= -tol && upper >= -tol) return {Verdict::Pass, margin};
    if (lower >= -10.0 * tol && upper >= -10.0 * tol) return {Verdict::Marginal, margin};
    return {Verdict::Fail, margin};
}

ConditionVerdict check_short_path(double deflated_energy, int n, double tol) {
    return banded(deflated_energy - (-1.0 + 1.0 / n), tol);
}

TailBoundVerdict check_tail_bound(const SpectrumTable& table, double eta, double gamma) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in [0,1]");
    TailBoundVerdict v;
    v.count = cumulative_states(table, (1.0 - eta) * table.e_star);
    v.log2_count = std::log2(static_cast<double>(v.count));
    v.log2_bound = (1.0 - gamma) * table.n;
    v.holds = v.log2_count <= v.log2_bound + 1e-12;
    return v;
}

double empirical_gamma(const SpectrumTable& table, double eta) {
    const auto c = cumulative_states(table, (1.0 - eta) * table.e_star);
    return 1.0 - std::log2(static_cast<double>(c)) / table.n;
}

ConditionReport evaluate_conditions(const HbOperator& op, const SpectralSummary& s,
                                    bool with_short_path, const SolveOptions& opts) {
    ConditionReport r;
    r.b = op.b();
    r.eta = op.eta();
    r.e_b = s.e_b;
    r.e_excited = s.e_excited;
    r.tol = s.tol;
    r.large_excited_energy = check_large_excited_energy(s);
    r.small_ground_energy_shift = check_small_ground_energy_shift(s.e_b, s.n, s.tol);
    r.e_deflated = std::numeric_limits<double>::quiet_NaN();
    if (with_short_path) {
        r.e_deflated = deflated_ground_energy(op, opts);
        r.short_path = check_short_path(r.e_deflated, s.n, s.tol);
    } else {
        r.short_path = {Verdict::Marginal, std::numeric_limits<double>::quiet_NaN()};
    }
    return r;
}

BScan scan_b_critical(std::shared_ptr<const Landscape> land, double eta, std::span<const double> grid,
                      const SolveOptions& opts) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw ParameterError("b-grid must be sorted ascending");
    BScan scan;
    scan.grid.assign(grid.begin(), grid.end());
    bool failed = false;
    for (double b : grid) {
        HbOperator op(land, eta, b);
        const auto s = ground_state(op, opts);
        auto rep = evaluate_conditions(op, s, false, opts);
        if (rep.both_hold()) {
            if (failed)
                scan.nonmonotone.push_back(b);
            else
                scan.b_critical = b;
        } else {
            failed = true;
        }
        scan.reports.push_back(rep);
    }
    return scan;
}

}  // namespace shortpath
