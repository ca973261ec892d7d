#pragma once

#include <limits>
#include <string>
#include <vector>

#include "shortpath/conditions.hpp"
#include "shortpath/spectral.hpp"

namespace shortpath {

/// e^{-1} - 2 e^{-2}.
double agsp_constant();

/// Lower bound on 2^{n/2} <+|P_l|z> for |E| = |H(z)/E*| >= 1 - eta:
/// exp((b/alpha)(|E|/eta) F((1-eta)/|E|)) (e^{-1} - 2e^{-2}).
/// Throws BoundNotApplicable unless |E| >= 1-eta, alpha < (1-b)/2, b < 1.
double agsp_lower_bound(double b, double alpha, double eta, double abs_e);

/// Default power for the projector approximation: ceil(3.5 n^2).
long default_L(int n);

struct LemmaOverlapCheck {
    long L = 0;
    double mu = 0.0;
    double slack = 0.0;          ///< 2^{-n/2} e^{-mu n}
    bool passes_L = false;
    bool passes_L1 = false;
    double worst_margin_L = 0.0; ///< min over z of lhs - (rhs - slack)
    double worst_margin_L1 = 0.0;
    double worst_margin = 0.0;   ///< min over z of the better of the two margins
    bool passes_either = false;  ///< each z holds at L or at L+1
    bool passes() const { return passes_either; }
};

/// <+|psi><psi|z> >= <+|P_l|z> - 2^{-n/2} e^{-mu n} for every z, at l = L or l = L+1.
/// Refuses (ConditionsUnverified) unless both spectral conditions hold.
LemmaOverlapCheck check_lemma_overlap_Pl(const SpectralSummary& s, const HbOperator& op,
                                         const ConditionReport& conditions, double mu = 2.0,
                                         long L = 0);

struct AgspCheck {
    long L = 0;
    double bound_zstar = 0.0;        ///< 2^{-n/2} times the multiplier at |E| = 1
    double measured_zstar = 0.0;     ///< min over optima and l in {L, L+1} of <+|P_l|z*>
    double worst_ratio = 0.0;        ///< min over deep-valley z of measured / bound
    std::size_t deep_valley = 0;     ///< assignments with H(z) <= (1-eta) E*
    bool holds = false;
};

/// Compares <+|P_l|z> at l in {L, L+1} with the exponential lower bound for
/// every z with H(z) <= (1-eta)E*. Throws BoundNotApplicable when the
/// parameter preconditions fail (including 3/alpha^2 <= l < n^3) and
/// ConditionsUnverified when the ground-energy shift condition fails.
AgspCheck check_agsp_bound(const SpectralSummary& s, const HbOperator& op,
                           const ConditionReport& conditions, double alpha, long L = 0);

struct WSigma {
    double product = 1.0;        ///< prod_{j<j0} 1/(1 - b f(|E|(1-alpha)^j))
    double lower_bound = 1.0;    ///< exp((b|E|/(eta alpha)) F((1-eta)/|E|)), or 1 if |E| < 1-eta
    long j0 = 0;
};

WSigma w_sigma_sum(double b, double alpha, double eta, double abs_e);

/// b|E|(1-alpha)^{l+1} (e^{2/alpha}/(1-alpha-b) + alpha^{-1} sum_w).
double not_in_expansion_bound(double b, double alpha, double eta, double abs_e, long ell);

struct RuntimeEstimate {
    double quantity = 0.0;  ///< 1/<+|psi> + 1/||Pi* psi||
    double bound = 0.0;     ///< 2/(<+|psi><psi|z*>) at the best optimum
    bool bound_holds = false;
};

RuntimeEstimate runtime_estimate(const SpectralSummary& s);

enum class Family { Generic, QuboDichotomy, MaxKCsp, KSpin };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct SpeedupParams {
    int n = 0;
    int k = 0;
    int m = 0;
    double ratio = 1.0;  ///< |E*|/m
    double eta = std::numeric_limits<double>::quiet_NaN();  ///< NaN: maximize over eta
    double gamma = std::numeric_limits<double>::quiet_NaN();
    double b = std::numeric_limits<double>::quiet_NaN();
    double a = std::numeric_limits<double>::quiet_NaN();    ///< alpha n
};

struct SpeedupReport {
    Family family = Family::Generic;
    SpeedupParams inputs;
    double eta = 0.0;        ///< eta at which c was evaluated
    double bracket = 0.0;    ///< eta-dependent factor (families with one)
    double c = 0.0;
    double runtime_exponent = 0.5;
    double c_direct = 0.0;   ///< same c rebuilt from gamma, b_max and alpha
    std::string formula;
};

SpeedupReport speedup_c(Family family, const SpeedupParams& params);

/// (1-eta)^3 F(1-eta) / (2 ln2 (2+ln2) eta).
template <class T>
T csp_bracket(const T& eta);
/// (1-eta)^2 F(1-eta) / (64 ln2 pi (2+ln2) eta).
template <class T>
T kspin_bracket(const T& eta);

struct Maximum {
    double arg = 0.0;
    double value = 0.0;
};

/// Golden-section maximization on (0,1) to 1e-10, cross-checked on a 1e5-point grid.
Maximum maximize_unit_interval(double (*fn)(double));

Maximum csp_bracket_max();
Maximum kspin_bracket_max();

/// Upper bound -n/(sqrt(2 pi) k) on the expected optimum of the k-spin ensemble.
double j_nk_bound(int n, int k);

}  // namespace shortpath
