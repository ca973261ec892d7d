#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shortpath/conditions.hpp"
#include "shortpath/cost.hpp"
#include "shortpath/spectral.hpp"

namespace shortpath {

/// How a jump endpoint's low-energy projector is obtained.
struct JumpOperator {
    enum class Kind { ComputationalDiagonal, HadamardDiagonal, LowSpace };
    Kind kind = Kind::LowSpace;
    std::string name;
    std::vector<double> diag;                   ///< entries in the diagonal basis
    std::vector<std::vector<double>> low_space; ///< orthonormal basis below the threshold

    /// Diagonal operators are classically computable and cost no block-encoding calls.
    bool classical() const { return kind != Kind::LowSpace; }

    static JumpOperator computational_diagonal(std::vector<double> diag, std::string name = "diag");
    static JumpOperator hadamard_diagonal(std::vector<double> diag, std::string name = "hadamard");
    /// -X/n, diagonal in the Hadamard basis with entries -(n - 2|x|)/n.
    static JumpOperator transverse_field(int n);
    static JumpOperator from_low_space(std::vector<std::vector<double>> vectors, std::string name);
};

struct JumpSpec {
    JumpOperator k1;
    JumpOperator k2;
    double e1 = 0.0;
    double e2 = 0.0;
    double delta1 = 1.0;
    double delta2 = 1.0;
    double p = 1.0;
    double delta = 1e-3;
    double kappa1 = 1.0;
    double kappa2 = 1.0;
};

struct JumpResult {
    std::vector<double> state;
    double success_prob = 0.0;
    long amplification_rounds = 0;
    double query_cost = 0.0;
};

/// (kappa / (gap sqrt p)) log(1/delta) log(p^{-1/2} delta^{-1} log(1/delta)), with D = 1.
double jump_query_cost(double kappa, double gap, double p, double delta);

/// max(0, ceil(pi / (4 asin sqrt(s)) - 1/2)).
long amplification_rounds(double success_prob);

/// Pi_2 psi / ||Pi_2 psi|| with the success probability and cost estimate.
/// Throws JumpAssumptionViolated when ||Pi_2 psi||^2 < p.
JumpResult simulate_jump(const JumpSpec& spec, std::span<const double> psi1);

/// Eigenvectors of H_b with energy <= e (dense below the dense cap, Lanczos otherwise).
std::vector<std::vector<double>> low_energy_space(const HbOperator& op, double e,
                                                  const SolveOptions& opts = {});

struct AlgorithmRun {
    Assignment z_out = 0;
    double value_out = 0.0;
    bool optimal = false;
    SpectralSummary summary;
    ConditionReport conditions;
    JumpResult prepare;        ///< -X/n -> H_b
    JumpResult amplify;        ///< H_b -> H/|E*|
    double total_cost = 0.0;
    double overlap_sum = 0.0;  ///< 1/<+|psi> + 1/||Pi* psi||
    std::string warning;
};

/// Idealized short-path run: jump from |+> to psi_b, jump onto the optimal set,
/// then sample a computational-basis outcome.
AlgorithmRun run_algorithm_1(std::shared_ptr<const Landscape> land, double eta, double b,
                             std::uint64_t seed, const SolveOptions& opts = {});

struct GridpointLog {
    double theta = 0.0;
    double phi = 0.0;
    double prepare_prob = 0.0;  ///< <+|psi>^2
    bool prepared = false;
    int iterations = 0;
    double estimate = 0.0;      ///< best cost value found, NaN if none
    bool found = false;
};

struct EstarSearchOptions {
    int theta_points = 6;
    int phi_points = 6;
    std::vector<std::pair<double, double>> extra_points;  ///< additional (theta, phi)
    double q = 0.0;         ///< lower bound on |E*|; 0 derives mean|H|/2
    double Q = 0.0;         ///< upper bound on |E*|; 0 derives max|H|
    double epsilon = 0.0;   ///< spectral separation; 0 derives the lowest gap
    double p_min = 1e-3;    ///< amplified measurement succeeds iff its probability >= p_min
    SolveOptions solve{};
};

struct EstarSearch {
    bool success = false;
    double estimate = 0.0;
    Assignment witness = 0;
    double q = 0.0;
    double Q = 0.0;
    double epsilon = 0.0;
    int max_iterations = 0;
    std::vector<GridpointLog> log;
};

/// Grid over (theta, phi) and binary search over a threshold U. For CSP
/// costs set epsilon to 1/D to resolve E* exactly.
EstarSearch estimate_Estar_binary_search(std::shared_ptr<const Landscape> land,
                                         const EstarSearchOptions& opts, std::uint64_t seed);

/// (2^k - 1)! m: the number of values E* can take for a MAX-k-CSP with m clauses.
double max_distinct_estar(int k, int m);

struct BaselineResult {
    Assignment best = 0;
    double best_value = 0.0;
    std::uint64_t samples = 0;
    bool success = false;
};

/// Uniform sampling until H(z) <= (1 - eta) E* or the budget runs out.
BaselineResult classical_baseline(const Landscape& land, double eta, std::uint64_t budget,
                                  std::uint64_t seed);

}  // namespace shortpath
