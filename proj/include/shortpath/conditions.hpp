#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "shortpath/cost.hpp"
#include "shortpath/spectral.hpp"

namespace shortpath {

enum class Verdict { Pass, Marginal, Fail };

std::string to_string(Verdict v);

/// Signed distance to a condition boundary and the banded verdict. Margins
/// within 10x the solver tolerance of the boundary are reported as marginal.
struct ConditionVerdict {
    Verdict verdict = Verdict::Fail;
    double margin = 0.0;
    bool holds() const { return verdict == Verdict::Pass; }
};

/// Non-degenerate ground state and E_excited > -1 + 1/n.
ConditionVerdict check_large_excited_energy(const SpectralSummary& s);

/// -1 - 1/n^3 <= E_b <= -1, inclusive, with the tolerance added to the lower boundary.
ConditionVerdict check_small_ground_energy_shift(double e_b, int n, double tol);

/// Ground energy orthogonal to |+> is >= -1 + 1/n.
ConditionVerdict check_short_path(double deflated_energy, int n, double tol);

struct TailBoundVerdict {
    bool holds = false;
    std::uint64_t count = 0;      ///< C((1 - eta) E*)
    double log2_count = 0.0;
    double log2_bound = 0.0;      ///< (1 - gamma) n
};

/// C((1 - eta) E*) <= 2^{(1 - gamma) n}.
TailBoundVerdict check_tail_bound(const SpectrumTable& table, double eta, double gamma);

/// 1 - log2 C((1 - eta) E*) / n.
double empirical_gamma(const SpectrumTable& table, double eta);

struct ConditionReport {
    double b = 0.0;
    double eta = 0.0;
    double e_b = 0.0;
    double e_excited = 0.0;
    double e_deflated = 0.0;      ///< NaN unless requested
    ConditionVerdict large_excited_energy;
    ConditionVerdict small_ground_energy_shift;
    ConditionVerdict short_path;  ///< only meaningful when e_deflated is set
    double tol = 0.0;
    bool both_hold() const { return large_excited_energy.holds() && small_ground_energy_shift.holds(); }
};

ConditionReport evaluate_conditions(const HbOperator& op, const SpectralSummary& s,
                                    bool with_short_path, const SolveOptions& opts = {});

struct BScan {
    double b_critical = 0.0;
    std::vector<double> grid;
    std::vector<ConditionReport> reports;
    std::vector<double> nonmonotone;  ///< grid points passing after an earlier failure
};

/// Largest grid b such that both spectral conditions hold at it and at every
/// smaller grid point; 0 if the first grid point fails.
BScan scan_b_critical(std::shared_ptr<const Landscape> land, double eta, std::span<const double> grid,
                      const SolveOptions& opts = {});

}  // namespace shortpath
