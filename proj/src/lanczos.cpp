#include "shortpath/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "shortpath/error.hpp"
#include "shortpath/rng.hpp"

namespace shortpath {

namespace {

constexpr std::size_t kChunk = 2048;

// Classical Gram-Schmidt applied twice: h_i = <u_i, w> summed over both
// passes, w orthogonal to every u_i on return. The second pass's dot products
// ride along with the first pass's subtraction, so the basis is read three
// times instead of four.
void gram_schmidt(const std::vector<const double*>& basis, std::span<double> w,
                  std::vector<double>& h) {
    const std::size_t count = basis.size();
    const std::size_t size = w.size();
    h.assign(count, 0.0);
    if (count == 0) return;
    for (std::size_t c = 0; c < size; c += kChunk) {
        const std::span<const double> wc(w.data() + c, std::min(kChunk, size - c));
        for (std::size_t i = 0; i < count; ++i) h[i] += dot({basis[i] + c, wc.size()}, wc);
    }
    std::vector<double> h2(count, 0.0);
    for (std::size_t c = 0; c < size; c += kChunk) {
        const std::size_t len = std::min(kChunk, size - c);
        double* wc = w.data() + c;
        for (std::size_t i = 0; i < count; ++i) {
            const double* u = basis[i] + c;
            const double hi = h[i];
            for (std::size_t z = 0; z < len; ++z) wc[z] -= hi * u[z];
        }
        for (std::size_t i = 0; i < count; ++i) h2[i] += dot({basis[i] + c, len}, {wc, len});
    }
    for (std::size_t c = 0; c < size; c += kChunk) {
        const std::size_t len = std::min(kChunk, size - c);
        double* wc = w.data() + c;
        for (std::size_t i = 0; i < count; ++i) {
            const double* u = basis[i] + c;
            const double hi = h2[i];
            for (std::size_t z = 0; z < len; ++z) wc[z] -= hi * u[z];
        }
    }
    for (std::size_t i = 0; i < count; ++i) h[i] += h2[i];
}

void project_out(std::span<const std::vector<double>> locked, std::span<double> w) {
    if (locked.empty()) return;
    std::vector<const double*> ptrs;
    for (const auto& u : locked) ptrs.push_back(u.data());
    std::vector<double> h;
    gram_schmidt(ptrs, w, h);
}

void scale(std::span<double> v, double s) {
    for (auto& x : v) x *= s;
}

// V[0..k) <- V[0..m) * Y[:, 0..k), in place chunk by chunk.
void rotate_basis(std::vector<std::vector<double>>& V, int m, const Eigen::MatrixXd& Y, int k) {
    const std::size_t size = V[0].size();
    std::vector<double> tmp(static_cast<std::size_t>(k) * kChunk);
    for (std::size_t c = 0; c < size; c += kChunk) {
        const std::size_t len = std::min(kChunk, size - c);
        std::fill(tmp.begin(), tmp.end(), 0.0);
        for (int j = 0; j < m; ++j) {
            const double* vj = V[j].data() + c;
            for (int i = 0; i < k; ++i) {
                const double y = Y(j, i);
                double* t = tmp.data() + static_cast<std::size_t>(i) * kChunk;
                for (std::size_t z = 0; z < len; ++z) t[z] += y * vj[z];
            }
        }
        for (int i = 0; i < k; ++i)
            std::copy_n(tmp.data() + static_cast<std::size_t>(i) * kChunk, len, V[i].data() + c);
    }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    const std::size_t size = a.size();
    std::size_t z = 0;
    for (; z + 4 <= size; z += 4) {
        s0 += a[z] * b[z];
        s1 += a[z + 1] * b[z + 1];
        s2 += a[z + 2] * b[z + 2];
        s3 += a[z + 3] * b[z + 3];
    }
    for (; z < size; ++z) s0 += a[z] * b[z];
    return (s0 + s1) + (s2 + s3);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

EigenPair lanczos_lowest(const LinearOperator& op, std::vector<double> start,
                         std::span<const std::vector<double>> locked, const LanczosOptions& opts) {
    const std::size_t size = op.dim;
    if (start.size() != size) throw ParameterError("start vector dimension mismatch");
    if (locked.size() >= size) throw ParameterError("nothing left after deflation");
    const int m = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(std::max(opts.basis_size, 2)),
                              size - locked.size()));
    const int keep = std::clamp(opts.keep, 1, std::max(1, m - 1));

    project_out(locked, start);
    const double s0 = norm(start);
    if (!(s0 > 1e-12)) throw ParameterError("start vector vanishes after deflation");
    scale(start, 1.0 / s0);

    std::vector<std::vector<double>> V;
    V.reserve(m);
    V.push_back(std::move(start));
    std::vector<double> w(size), h, x, ax;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    EigenPair result;
    double last_residual = std::numeric_limits<double>::infinity();
    int k = 0;

    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        int mm = m;
        bool invariant = false;
        double beta = 0.0;
        for (int j = k; j < m; ++j) {
            op.apply(V[j], w);
            ++result.matvecs;
            project_out(locked, w);
            std::vector<const double*> ptrs;
            for (int i = 0; i <= j; ++i) ptrs.push_back(V[i].data());
            gram_schmidt(ptrs, w, h);
            for (int i = 0; i <= j; ++i) T(i, j) = h[i];
            project_out(locked, w);
            for (int i = 0; i < j; ++i) T(j, i) = T(i, j);
            beta = norm(w);
            const double tscale = std::max(1.0, T.topLeftCorner(j + 1, j + 1).cwiseAbs().maxCoeff());
            if (beta <= 1e-13 * tscale) {
                mm = j + 1;
                invariant = true;
                break;
            }
            if (j + 1 < m) {
                if (static_cast<int>(V.size()) <= j + 1) V.emplace_back(size);
                for (std::size_t z = 0; z < size; ++z) V[j + 1][z] = w[z] / beta;
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T.topLeftCorner(mm, mm));
        const Eigen::VectorXd& theta = es.eigenvalues();
        const Eigen::MatrixXd& Y = es.eigenvectors();
        const double est = invariant ? 0.0 : beta * std::abs(Y(mm - 1, 0));
        const double sep =
            mm > 1 ? std::max(theta(1) - theta(0), 1e-300) : std::numeric_limits<double>::infinity();
        auto good = [&](double r) {
            return r <= opts.tol || (opts.value_only && r * r / sep <= opts.tol);
        };
        last_residual = est;

        if (good(est) || invariant) {
            x.assign(size, 0.0);
            for (int j = 0; j < mm; ++j) {
                const double y = Y(j, 0);
                const double* vj = V[j].data();
                for (std::size_t z = 0; z < size; ++z) x[z] += y * vj[z];
            }
            project_out(locked, x);
            scale(x, 1.0 / norm(x));
            ax.resize(size);
            op.apply(x, ax);
            ++result.matvecs;
            project_out(locked, ax);
            const double value = dot(x, ax);
            for (std::size_t z = 0; z < size; ++z) ax[z] -= value * x[z];
            const double true_res = norm(ax);
            last_residual = true_res;
            if (good(true_res) || invariant) {
                result.value = value;
                result.vector = std::move(x);
                result.residual = true_res;
                return result;
            }
        }

        k = std::min(keep, mm - 1);
        rotate_basis(V, mm, Y, k);
        if (static_cast<int>(V.size()) <= k) V.emplace_back(size);
        for (std::size_t z = 0; z < size; ++z) V[k][z] = w[z] / beta;
        T.setZero();
        for (int i = 0; i < k; ++i) T(i, i) = theta(i);
    }
    throw ConvergenceError("Lanczos did not converge within the restart limit", last_residual);
}

std::vector<EigenPair> lanczos_lowest_k(const LinearOperator& op, int count,
                                        std::vector<double> start, std::uint64_t seed,
                                        const LanczosOptions& opts) {
    std::vector<EigenPair> pairs;
    std::vector<std::vector<double>> locked;
    for (int i = 0; i < count; ++i) {
        std::vector<double> s;
        if (i == 0) {
            s = std::move(start);
        } else {
            CounterRng rng(seed, static_cast<std::uint64_t>(i));
            s.resize(op.dim);
            for (auto& v : s) v = rng.normal();
        }
        auto p = lanczos_lowest(op, std::move(s), locked, opts);
        locked.push_back(p.vector);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

}  // namespace shortpath
