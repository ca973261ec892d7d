#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace shortpath {

/// Basis index: bit i set means z_i = -1.
using Assignment = std::uint64_t;

inline constexpr int kDefaultEnumerationCap = 26;

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(std::int64_t num, std::int64_t den);
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

struct Term {
    std::vector<int> vars;
    double coeff = 0.0;
};

/// Sum of monomials c_t * prod_{i in S_t} z_i with no constant term.
class PolyCost {
public:
    PolyCost(int n, std::vector<Term> terms);

    int n() const { return n_; }
    int degree() const;
    const std::vector<Term>& terms() const { return terms_; }

    double evaluate(Assignment x) const;
    double evaluate(std::span<const int> z) const;

    /// H over all 2^n assignments. Direct term-ordered sums for small n,
    /// a Walsh-Hadamard transform of the coefficient vector otherwise.
    std::vector<double> evaluate_all() const;
    std::vector<double> evaluate_all_direct() const;

private:
    int n_;
    std::vector<Term> terms_;
    std::vector<Assignment> masks_;
};

/// A clause on k variables. Local pattern bit j set means z_{vars[j]} = -1.
struct Clause {
    std::vector<int> vars;
    std::vector<std::uint32_t> satisfying;
};

/// Clause t contributes -1 when satisfied and s_t/(2^k - s_t) otherwise.
class CspCost {
public:
    CspCost(int n, std::vector<Clause> clauses);

    int n() const { return n_; }
    int max_arity() const;
    std::size_t num_clauses() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }

    Rational unsatisfied_value(std::size_t t) const;

    /// Common denominator D: D*H(z) is an integer for every z.
    std::int64_t denominator() const { return den_; }
    std::int64_t scaled(Assignment x) const;

    Rational evaluate_exact(Assignment x) const;
    double evaluate(Assignment x) const;
    double evaluate(std::span<const int> z) const;

    std::vector<std::int64_t> evaluate_all_scaled() const;
    std::vector<double> evaluate_all() const;

private:
    int n_;
    std::vector<Clause> clauses_;
    std::vector<Assignment> masks_;
    std::vector<std::uint64_t> sat_bits_;
    std::vector<std::int64_t> unsat_scaled_;
    std::int64_t den_ = 1;
};

using CostFunction = std::variant<PolyCost, CspCost>;

int num_vars(const CostFunction& cost);
int arity(const CostFunction& cost);
double evaluate(const CostFunction& cost, Assignment x);
double evaluate(const CostFunction& cost, std::span<const int> z);
std::vector<double> evaluate_all(const CostFunction& cost, int cap = kDefaultEnumerationCap);

/// Unnormalized in-place Walsh-Hadamard transform; size must be a power of two.
void walsh_hadamard(std::span<double> v);

/// Convert a +-1 vector to a basis index.
Assignment to_assignment(std::span<const int> z);

struct SpectrumLevel {
    double energy = 0.0;
    std::uint64_t multiplicity = 0;
};

struct SpectrumTable {
    int n = 0;
    std::vector<SpectrumLevel> levels;
    double e_star = 0.0;
    std::vector<Assignment> optimal;
    /// Exact tables (CSP): D and D*energy for each level. den == 0 otherwise.
    std::int64_t den = 0;
    std::vector<std::int64_t> scaled_levels;
};

/// Relative tolerance under which two float energies count as the same optimum.
inline constexpr double kOptimumRelTol = 1e-9;

SpectrumTable enumerate_spectrum(const CostFunction& cost, int cap = kDefaultEnumerationCap);
SpectrumTable spectrum_from_values(int n, std::span<const double> values);
SpectrumTable spectrum_from_scaled(int n, std::span<const std::int64_t> scaled, std::int64_t den);

/// Optimal assignments of a value array, ties within kOptimumRelTol.
std::vector<Assignment> optimal_assignments(std::span<const double> values, double e_star);

/// |{z : H(z) <= E}|.
std::uint64_t cumulative_states(const SpectrumTable& table, double e);
std::uint64_t cumulative_states(const SpectrumTable& table, const Rational& e);

// Samplers.
PolyCost sample_k_spin(int n, int k, std::uint64_t seed);
PolyCost sample_e_k_lin2(int n, int k, int m, std::uint64_t seed);
PolyCost sample_qubo(int n, std::uint64_t seed);
CspCost sample_random_kcsp(int n, int k, int m, int s, std::uint64_t seed);
CspCost sample_random_kcnf(int n, int k, int m, std::uint64_t seed);

PolyCost qubo_to_e2lin2(const PolyCost& cost);

struct DepolarizingCheck {
    bool holds = false;
    double max_violation = 0.0;
};

DepolarizingCheck check_depolarizing(const CostFunction& cost, double alpha, double tol = 1e-12);
DepolarizingCheck check_depolarizing(int n, std::span<const double> values, double alpha,
                                     double tol = 1e-12);

struct SubdepolarizingCheck {
    bool holds = false;
    double min_slack = 0.0;
    int trials = 0;
};

SubdepolarizingCheck check_subdepolarizing(const CostFunction& cost, double eta, double alpha,
                                           int trials, std::uint64_t seed, int max_factors = 4,
                                           double tol = 1e-12);

struct Instance {
    CostFunction cost;
    int k = 0;
    std::uint64_t seed = 0;
    std::string ensemble;
};

void to_json(nlohmann::json& j, const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);

}  // namespace shortpath
