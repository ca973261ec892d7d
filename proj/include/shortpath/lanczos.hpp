#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace shortpath {

/// Symmetric operator given only through its action.
struct LinearOperator {
    std::size_t dim = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
};

struct LanczosOptions {
    double tol = 1e-8;           ///< residual norm target
    int basis_size = 14;         ///< vectors held between restarts
    int keep = 6;                ///< Ritz vectors kept on restart
    int max_restarts = 2000;
    bool value_only = false;     ///< converge on the eigenvalue bound r^2/sep instead of r
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    int matvecs = 0;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Lowest eigenpair of P A P on range(P), where P projects out the orthonormal
/// vectors in `locked`. Thick-restart Lanczos with full reorthogonalization.
/// Throws ConvergenceError carrying the last residual.
EigenPair lanczos_lowest(const LinearOperator& op, std::vector<double> start,
                         std::span<const std::vector<double>> locked, const LanczosOptions& opts);

/// The `count` lowest eigenpairs by successive deflation, so degenerate
/// eigenvalues are returned with their multiplicity.
std::vector<EigenPair> lanczos_lowest_k(const LinearOperator& op, int count,
                                        std::vector<double> start, std::uint64_t seed,
                                        const LanczosOptions& opts);

}  // namespace shortpath
