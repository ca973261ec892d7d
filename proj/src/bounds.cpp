#include "shortpath/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>

#include "shortpath/error.hpp"
#include "shortpath/transform.hpp"

namespace shortpath {

namespace {

constexpr double kLn2 = boost::math::constants::ln_two<double>();

double check_abs_e(double abs_e) {
    if (!(abs_e > 0.0 && abs_e <= 1.0 + 1e-12)) throw ParameterError("|E| must lie in (0,1]");
    return std::min(abs_e, 1.0);
}

double golden(double (*fn)(double), double lo, double hi) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = fn(d);
        }
    }
    return (a + b) / 2.0;
}

double csp_bracket_d(double eta) { return csp_bracket<double>(eta); }
double kspin_bracket_d(double eta) { return kspin_bracket<double>(eta); }

double generic_c(double b, double a, double eta) {
    return b * F(1.0 - eta) / (a * eta * kLn2);
}

}  // namespace

double agsp_constant() { return std::exp(-1.0) - 2.0 * std::exp(-2.0); }

double agsp_lower_bound(double b, double alpha, double eta, double abs_e) {
    check_eta(eta);
    abs_e = check_abs_e(abs_e);
    if (!(b >= 0.0 && b < 1.0)) throw BoundNotApplicable("requires 0 <= b < 1");
    if (!(alpha > 0.0 && alpha < (1.0 - b) / 2.0))
        throw BoundNotApplicable("requires 0 < alpha < (1 - b)/2");
    if (abs_e < 1.0 - eta) throw BoundNotApplicable("requires |E| >= 1 - eta");
    const double exponent = (b / alpha) * (abs_e / eta) * F((1.0 - eta) / abs_e);
    return std::exp(exponent) * agsp_constant();
}

long default_L(int n) { return static_cast<long>(std::ceil(3.5 * n * n)); }

LemmaOverlapCheck check_lemma_overlap_Pl(const SpectralSummary& s, const HbOperator& op,
                                         const ConditionReport& conditions, double mu, long L) {
    if (!conditions.both_hold())
        throw ConditionsUnverified("overlap lemma requires both spectral conditions to hold");
    if (s.psi.size() != op.dim()) throw ParameterError("summary does not match operator");
    const int n = op.n();
    LemmaOverlapCheck out;
    out.L = L > 0 ? L : default_L(n);
    out.mu = mu;
    const double amp = std::pow(2.0, -0.5 * n);
    out.slack = amp * std::exp(-mu * n);
    const double tol = amp * std::max(1e-12, 10.0 * s.residual);

    auto margins = [&](long ell) {
        const auto row = plus_P_ell_row(op, s.e_b, ell);
        std::vector<double> m(row.size());
        for (std::size_t z = 0; z < row.size(); ++z) m[z] = s.overlap_plus * s.psi[z] - (row[z] - out.slack);
        return m;
    };
    const auto mL = margins(out.L);
    const auto mL1 = margins(out.L + 1);
    out.worst_margin_L = *std::min_element(mL.begin(), mL.end());
    out.worst_margin_L1 = *std::min_element(mL1.begin(), mL1.end());
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < mL.size(); ++z)
        out.worst_margin = std::min(out.worst_margin, std::max(mL[z], mL1[z]));
    out.passes_L = out.worst_margin_L >= -tol;
    out.passes_L1 = out.worst_margin_L1 >= -tol;
    out.passes_either = out.worst_margin >= -tol;
    return out;
}

AgspCheck check_agsp_bound(const SpectralSummary& s, const HbOperator& op,
                           const ConditionReport& conditions, double alpha, long L) {
    const int n = op.n();
    AgspCheck out;
    out.L = L > 0 ? L : default_L(n);
    const double b = op.b(), eta = op.eta();
    // Parameter preconditions first so that callers can tell the two refusals apart.
    agsp_lower_bound(b, alpha, eta, 1.0);
    if (static_cast<double>(out.L) < 3.0 / (alpha * alpha) ||
        static_cast<double>(out.L + 1) >= std::pow(static_cast<double>(n), 3))
        throw BoundNotApplicable("requires 3/alpha^2 <= l < n^3");
    if (!conditions.small_ground_energy_shift.holds())
        throw ConditionsUnverified("bound requires the small ground-energy shift condition");

    const auto row_L = plus_P_ell_row(op, s.e_b, out.L);
    const auto row_L1 = plus_P_ell_row(op, s.e_b, out.L + 1);
    const Landscape& land = op.landscape();
    const double amp = std::pow(2.0, -0.5 * n);
    const double abs_star = std::abs(land.e_star);
    out.bound_zstar = amp * agsp_lower_bound(b, alpha, eta, 1.0);
    out.measured_zstar = std::numeric_limits<double>::infinity();
    for (Assignment z : land.optimal)
        out.measured_zstar = std::min({out.measured_zstar, row_L[z], row_L1[z]});
    out.worst_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < land.dim(); ++z) {
        const double abs_e = std::min(1.0, std::abs(land.values[z]) / abs_star);
        if (!(land.values[z] < 0.0) || abs_e < 1.0 - eta) continue;
        ++out.deep_valley;
        const double bound = amp * agsp_lower_bound(b, alpha, eta, abs_e);
        out.worst_ratio = std::min(out.worst_ratio, std::min(row_L[z], row_L1[z]) / bound);
    }
    out.holds = out.worst_ratio >= 1.0 - 1e-9;
    return out;
}

WSigma w_sigma_sum(double b, double alpha, double eta, double abs_e) {
    check_eta(eta);
    abs_e = check_abs_e(abs_e);
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
    if (b < 0.0) throw ParameterError("b must be non-negative");
    WSigma out;
    if (abs_e <= 1.0 - eta || b == 0.0) return out;
    if (!(b * f_eta(eta, abs_e) < 1.0)) throw ParameterError("w(sigma) sum diverges: b f(|E|) >= 1");
    out.j0 = static_cast<long>(std::ceil((std::log(1.0 - eta) - std::log(abs_e)) / std::log(1.0 - alpha)));
    double log_product = 0.0;
    for (long j = 0; j < out.j0; ++j) {
        const double fj = f_eta(eta, abs_e * std::pow(1.0 - alpha, static_cast<double>(j)));
        log_product -= std::log1p(-b * fj);
    }
    out.product = std::exp(log_product);
    out.lower_bound = std::exp((b * abs_e / (eta * alpha)) * F((1.0 - eta) / abs_e));
    return out;
}

double not_in_expansion_bound(double b, double alpha, double eta, double abs_e, long ell) {
    if (!(alpha + b < 1.0)) throw ParameterError("requires alpha + b < 1");
    if (ell < 0) throw ParameterError("l must be non-negative");
    const WSigma w = w_sigma_sum(b, alpha, eta, abs_e);
    return b * abs_e * std::pow(1.0 - alpha, static_cast<double>(ell + 1)) *
           (std::exp(2.0 / alpha) / (1.0 - alpha - b) + w.product / alpha);
}

RuntimeEstimate runtime_estimate(const SpectralSummary& s) {
    RuntimeEstimate out;
    const double inf = std::numeric_limits<double>::infinity();
    const double best = s.max_overlap_zstar();
    out.quantity = (s.overlap_plus > 0.0 && s.overlap_opt > 0.0)
                       ? 1.0 / s.overlap_plus + 1.0 / s.overlap_opt
                       : inf;
    out.bound = (s.overlap_plus > 0.0 && best > 0.0) ? 2.0 / (s.overlap_plus * best) : inf;
    out.bound_holds = out.bound >= out.quantity * (1.0 - 1e-12);
    return out;
}

std::string to_string(Family f) {
    switch (f) {
        case Family::Generic: return "generic";
        case Family::QuboDichotomy: return "qubo_dichotomy";
        case Family::MaxKCsp: return "max_k_csp";
        case Family::KSpin: return "k_spin";
    }
    return "unknown";
}

Family family_from_string(const std::string& s) {
    if (s == "generic") return Family::Generic;
    if (s == "qubo_dichotomy") return Family::QuboDichotomy;
    if (s == "max_k_csp") return Family::MaxKCsp;
    if (s == "k_spin") return Family::KSpin;
    throw ParameterError("unknown family: " + s);
}

template <class T>
T csp_bracket(const T& eta) {
    check_eta(eta);
    const T ln2 = boost::math::constants::ln_two<T>();
    const T om = 1 - eta;
    return om * om * om * F<T>(om) / (2 * ln2 * (2 + ln2) * eta);
}

template <class T>
T kspin_bracket(const T& eta) {
    check_eta(eta);
    const T ln2 = boost::math::constants::ln_two<T>();
    const T pi = boost::math::constants::pi<T>();
    const T om = 1 - eta;
    return om * om * F<T>(om) / (64 * ln2 * pi * (2 + ln2) * eta);
}

template double csp_bracket<double>(const double&);
template double kspin_bracket<double>(const double&);
template HighPrecision csp_bracket<HighPrecision>(const HighPrecision&);
template HighPrecision kspin_bracket<HighPrecision>(const HighPrecision&);

Maximum maximize_unit_interval(double (*fn)(double)) {
    constexpr double lo = 1e-9, hi = 1.0 - 1e-9;
    Maximum best;
    best.arg = golden(fn, lo, hi);
    best.value = fn(best.arg);
    constexpr int kGrid = 100000;
    const double h = (hi - lo) / kGrid;
    double grid_arg = lo, grid_val = fn(lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = lo + i * h;
        const double v = fn(x);
        if (v > grid_val) {
            grid_val = v;
            grid_arg = x;
        }
    }
    if (grid_val > best.value) {
        const double x = golden(fn, std::max(lo, grid_arg - h), std::min(hi, grid_arg + h));
        const double v = fn(x);
        if (v >= grid_val) {
            best = {x, v};
        } else {
            best = {grid_arg, grid_val};
        }
    }
    return best;
}

Maximum csp_bracket_max() { return maximize_unit_interval(&csp_bracket_d); }
Maximum kspin_bracket_max() { return maximize_unit_interval(&kspin_bracket_d); }

SpeedupReport speedup_c(Family family, const SpeedupParams& p) {
    SpeedupReport r;
    r.family = family;
    r.inputs = p;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.bracket = nan;
    switch (family) {
        case Family::Generic: {
            if (std::isnan(p.b) || std::isnan(p.a) || std::isnan(p.eta))
                throw ParameterError("generic family needs b, a and eta");
            check_eta(p.eta);
            if (!(p.a > 0.0) || !(p.b > 0.0)) throw ParameterError("a and b must be positive");
            r.eta = p.eta;
            r.c = generic_c(p.b, p.a, p.eta);
            r.c_direct = r.c;
            r.formula = "c = b F(1-eta) / (a eta ln2)";
            break;
        }
        case Family::QuboDichotomy: {
            if (std::isnan(p.gamma) || std::isnan(p.eta))
                throw ParameterError("dichotomy family needs gamma and eta");
            check_eta(p.eta);
            const int k = p.k > 0 ? p.k : 2;
            r.inputs.k = k;
            r.eta = p.eta;
            r.c = p.gamma * p.eta / (4.0 * (2.0 + kLn2) * k);
            // Exact generic value at b = b_max(gamma), a = 2k; uses F(1-eta) itself
            // rather than its lower bound eta/2, so c <= c_direct.
            r.inputs.b = b_max(p.gamma);
            r.inputs.a = 2.0 * k;
            r.c_direct = generic_c(r.inputs.b, r.inputs.a, p.eta);
            r.formula = "c = gamma eta / (4 (2+ln2) k)";
            break;
        }
        case Family::MaxKCsp: {
            if (p.k < 1) throw ParameterError("k must be positive");
            if (!(p.ratio > 0.0 && p.ratio <= 1.0)) throw ParameterError("|E*|/m must lie in (0,1]");
            r.eta = std::isnan(p.eta) ? csp_bracket_max().arg : p.eta;
            r.bracket = csp_bracket<double>(r.eta);
            const double tail = std::pow(p.ratio, 3) / (std::ldexp(1.0, 3 * p.k) * std::pow(p.k, 3));
            r.c = 0.5 * r.bracket * tail;
            r.inputs.gamma = gamma_csp(p.k, p.ratio, r.eta);
            r.inputs.b = b_max(r.inputs.gamma);
            r.inputs.a = std::ldexp(static_cast<double>(p.k), p.k) / (p.ratio * (1.0 - r.eta));
            r.c_direct = 0.5 * generic_c(r.inputs.b, r.inputs.a, r.eta);
            r.formula = "c = [(1-eta)^3 F(1-eta) / (2 ln2 (2+ln2) eta)] (|E*|/m)^3 / (2^{3k} k^3) / 2";
            break;
        }
        case Family::KSpin: {
            if (p.k < 1) throw ParameterError("k must be positive");
            r.eta = std::isnan(p.eta) ? kspin_bracket_max().arg : p.eta;
            r.bracket = kspin_bracket<double>(r.eta);
            r.c = r.bracket / std::pow(p.k, 3);
            r.inputs.gamma = gamma_kspin(p.k, r.eta);
            r.inputs.b = b_max(r.inputs.gamma);
            r.inputs.a = 2.0 * p.k;
            r.c_direct = generic_c(r.inputs.b, r.inputs.a, r.eta);
            r.formula = "c = [(1-eta)^2 F(1-eta) / (64 ln2 pi (2+ln2) eta)] / k^3";
            break;
        }
    }
    r.inputs.eta = r.eta;
    r.runtime_exponent = 0.5 - r.c;
    return r;
}

double j_nk_bound(int n, int k) {
    if (k < 1 || n < k) throw ParameterError("requires 1 <= k <= n");
    return -static_cast<double>(n) / (std::sqrt(2.0 * boost::math::constants::pi<double>()) * k);
}

}  // namespace shortpath
