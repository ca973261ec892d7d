#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shortpath/cost.hpp"
#include "shortpath/lanczos.hpp"

namespace shortpath {

/// Cost values of every assignment together with E* and the optimal set.
struct Landscape {
    int n = 0;
    std::vector<double> values;
    double e_star = 0.0;
    std::vector<Assignment> optimal;

    static std::shared_ptr<const Landscape> from_values(int n, std::vector<double> values);
    static std::shared_ptr<const Landscape> from_cost(const CostFunction& cost,
                                                      int cap = kDefaultEnumerationCap);
    std::size_t dim() const { return values.size(); }
};

inline constexpr int kDenseCap = 14;
inline constexpr int kLanczosCap = 26;
inline constexpr double kDenseTol = 1e-10;
inline constexpr double kLanczosTol = 1e-8;

/// H_b = -X/n + b g_eta(H/|E*|), applied matrix-free.
class HbOperator {
public:
    HbOperator(std::shared_ptr<const Landscape> landscape, double eta, double b);

    /// Diagonal min(0, phi (H/Q + theta)) used by the unknown-E* search.
    static HbOperator theta_phi(std::shared_ptr<const Landscape> landscape, double theta,
                                double phi, double q);

    int n() const { return n_; }
    std::size_t dim() const { return diag_.size(); }
    double eta() const { return eta_; }
    double b() const { return b_; }
    double e_star() const { return landscape_->e_star; }
    const Landscape& landscape() const { return *landscape_; }
    std::shared_ptr<const Landscape> landscape_ptr() const { return landscape_; }
    const std::vector<double>& diag() const { return diag_; }

    void apply(std::span<const double> v, std::span<double> out) const;
    LinearOperator as_linear_operator() const;
    Eigen::MatrixXd dense() const;

private:
    HbOperator(std::shared_ptr<const Landscape> landscape, std::vector<double> diag, double eta,
               double b);

    std::shared_ptr<const Landscape> landscape_;
    int n_;
    double eta_;
    double b_;
    std::vector<double> diag_;
};

enum class SolveMethod { Auto, Dense, Lanczos };

struct SolveOptions {
    SolveMethod method = SolveMethod::Auto;
    double tol = 0.0;               ///< 0 picks the method default
    bool compute_max = false;       ///< dense always computes the maximum
    std::uint64_t seed = 0;
    LanczosOptions lanczos{};
};

struct SpectralSummary {
    int n = 0;
    double e_b = 0.0;
    double e_excited = 0.0;
    double e_max = 0.0;             ///< NaN when not computed
    bool degenerate = false;
    std::vector<double> psi;
    double overlap_plus = 0.0;
    double overlap_opt = 0.0;
    std::vector<double> overlap_zstar;  ///< one per optimal assignment
    double residual = 0.0;
    double tol = 0.0;
    std::string method;
    int matvecs = 0;

    double max_overlap_zstar() const;
};

SolveMethod resolve_method(SolveMethod m, int n);

SpectralSummary ground_state(const HbOperator& op, const SolveOptions& opts = {});

/// Lowest `count` eigenvalues (with multiplicity).
std::vector<double> lowest_eigenvalues(const HbOperator& op, int count,
                                       const SolveOptions& opts = {});

/// Lowest eigenvalue of H_b restricted to the complement of |+>.
double deflated_ground_energy(const HbOperator& op, const SolveOptions& opts = {});

/// Flip sign so the largest-magnitude entry is positive, then fill overlaps.
void finish_summary(SpectralSummary& s, const Landscape& land);

std::vector<double> plus_state(std::size_t dim);

struct PEllResult {
    std::vector<double> direction;  ///< unit vector
    double log_scale = 0.0;         ///< P_l v = exp(log_scale) * direction
    std::vector<double> values() const;
};

/// (H_b / E_b)^l v with per-step renormalization.
PEllResult apply_P_ell(const HbOperator& op, double e_b, long ell, std::span<const double> v);

/// <+|P_l|z> for every z.
std::vector<double> plus_P_ell_row(const HbOperator& op, double e_b, long ell);

struct PsiHeader {
    int n = 0;
    double b = 0.0;
    double eta = 0.0;
    std::uint64_t seed = 0;
};

void write_psi(const std::string& path, const PsiHeader& h, std::span<const double> psi);
std::vector<double> read_psi(const std::string& path, PsiHeader& h);

}  // namespace shortpath
