#include "shortpath/algo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "shortpath/error.hpp"
#include "shortpath/lanczos.hpp"
#include "shortpath/rng.hpp"

namespace shortpath {

namespace {

int log2_dim(std::size_t dim) {
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    if ((std::size_t{1} << n) != dim) throw ParameterError("dimension must be a power of two");
    return n;
}

std::vector<double> project(const JumpSpec& spec, std::span<const double> psi) {
    const JumpOperator& k2 = spec.k2;
    std::vector<double> out(psi.size(), 0.0);
    switch (k2.kind) {
        case JumpOperator::Kind::ComputationalDiagonal:
            if (k2.diag.size() != psi.size()) throw ParameterError("diagonal size mismatch");
            for (std::size_t z = 0; z < psi.size(); ++z)
                if (k2.diag[z] <= spec.e2) out[z] = psi[z];
            break;
        case JumpOperator::Kind::HadamardDiagonal: {
            if (k2.diag.size() != psi.size()) throw ParameterError("diagonal size mismatch");
            out.assign(psi.begin(), psi.end());
            walsh_hadamard(out);
            for (std::size_t x = 0; x < out.size(); ++x)
                if (k2.diag[x] > spec.e2) out[x] = 0.0;
            walsh_hadamard(out);
            const double s = 1.0 / static_cast<double>(out.size());
            for (auto& v : out) v *= s;
            break;
        }
        case JumpOperator::Kind::LowSpace:
            for (const auto& u : k2.low_space) {
                if (u.size() != psi.size()) throw ParameterError("low-space vector size mismatch");
                const double c = dot(u, psi);
                for (std::size_t z = 0; z < psi.size(); ++z) out[z] += c * u[z];
            }
            break;
    }
    return out;
}

}  // namespace

JumpOperator JumpOperator::computational_diagonal(std::vector<double> diag, std::string name) {
    JumpOperator op;
    op.kind = Kind::ComputationalDiagonal;
    op.diag = std::move(diag);
    op.name = std::move(name);
    return op;
}

JumpOperator JumpOperator::hadamard_diagonal(std::vector<double> diag, std::string name) {
    JumpOperator op;
    op.kind = Kind::HadamardDiagonal;
    op.diag = std::move(diag);
    op.name = std::move(name);
    return op;
}

JumpOperator JumpOperator::transverse_field(int n) {
    if (n < 1 || n > kLanczosCap) throw ParameterError("n out of range");
    std::vector<double> diag(std::size_t{1} << n);
    for (std::size_t x = 0; x < diag.size(); ++x) {
        const int w = std::popcount(x);
        diag[x] = -static_cast<double>(n - 2 * w) / n;
    }
    return hadamard_diagonal(std::move(diag), "-X/n");
}

JumpOperator JumpOperator::from_low_space(std::vector<std::vector<double>> vectors, std::string name) {
    JumpOperator op;
    op.kind = Kind::LowSpace;
    op.low_space = std::move(vectors);
    op.name = std::move(name);
    return op;
}

double jump_query_cost(double kappa, double gap, double p, double delta) {
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must lie in (0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
    if (!(kappa > 0.0)) throw ParameterError("kappa must be positive");
    if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
    const double ld = std::log(1.0 / delta);
    return kappa / (gap * std::sqrt(p)) * ld * std::log(ld / (std::sqrt(p) * delta));
}

long amplification_rounds(double s) {
    if (!(s > 0.0)) throw ParameterError("success probability must be positive");
    s = std::min(s, 1.0);
    const double r = std::numbers::pi / (4.0 * std::asin(std::sqrt(s))) - 0.5;
    // asin is ill-conditioned near 1, so round r with a loose tolerance.
    return std::max(0L, static_cast<long>(std::ceil(r - 1e-6)));
}

JumpResult simulate_jump(const JumpSpec& spec, std::span<const double> psi1) {
    if (!(spec.p > 0.0 && spec.p <= 1.0)) throw ParameterError("p must lie in (0,1]");
    if (!(spec.delta > 0.0 && spec.delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
    const double nrm = norm(psi1);
    if (std::abs(nrm - 1.0) > 1e-9) throw ParameterError("input state must be normalized");
    JumpResult r;
    r.state = project(spec, psi1);
    r.success_prob = dot(r.state, r.state);
    if (r.success_prob < spec.p)
        throw JumpAssumptionViolated("projected weight " + std::to_string(r.success_prob) +
                                     " is below p = " + std::to_string(spec.p));
    const double s = 1.0 / std::sqrt(r.success_prob);
    for (auto& v : r.state) v *= s;
    r.amplification_rounds = amplification_rounds(r.success_prob);
    if (!spec.k1.classical())
        r.query_cost += jump_query_cost(spec.kappa1, spec.delta1, spec.p, spec.delta);
    if (!spec.k2.classical())
        r.query_cost += jump_query_cost(spec.kappa2, spec.delta2, spec.p, spec.delta);
    return r;
}

std::vector<std::vector<double>> low_energy_space(const HbOperator& op, double e,
                                                  const SolveOptions& opts) {
    std::vector<std::vector<double>> out;
    if (resolve_method(opts.method, op.n()) == SolveMethod::Dense) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
        for (Eigen::Index i = 0; i < es.eigenvalues().size() && es.eigenvalues()(i) <= e; ++i) {
            const Eigen::VectorXd v = es.eigenvectors().col(i);
            out.emplace_back(v.data(), v.data() + v.size());
        }
        return out;
    }
    LanczosOptions lo = opts.lanczos;
    if (opts.tol > 0.0) lo.tol = opts.tol;
    const LinearOperator lin = op.as_linear_operator();
    constexpr int kMaxVectors = 64;
    for (int i = 0; i < kMaxVectors; ++i) {
        CounterRng rng(opts.seed, static_cast<std::uint64_t>(100 + i));
        std::vector<double> start(op.dim());
        for (auto& v : start) v = rng.normal();
        auto p = lanczos_lowest(lin, std::move(start), out, lo);
        if (p.value > e) break;
        out.push_back(std::move(p.vector));
    }
    return out;
}

AlgorithmRun run_algorithm_1(std::shared_ptr<const Landscape> land, double eta, double b,
                             std::uint64_t seed, const SolveOptions& opts) {
    const int n = land->n;
    HbOperator op(land, eta, b);
    AlgorithmRun run;
    run.summary = ground_state(op, opts);
    run.conditions = evaluate_conditions(op, run.summary, false, opts);
    const SpectralSummary& s = run.summary;
    if (!run.conditions.large_excited_energy.holds())
        run.warning = "large excited-energy condition does not hold; runtime guarantee void";

    const double delta = std::exp(-static_cast<double>(n));
    const double gap = s.e_excited - s.e_b;
    std::vector<std::vector<double>> ground;
    if (s.degenerate) {
        ground = low_energy_space(op, s.e_b + 10.0 * std::max(s.tol, kDenseTol), opts);
    } else {
        ground.push_back(s.psi);
    }

    JumpSpec prep;
    prep.k1 = JumpOperator::transverse_field(n);
    prep.k2 = JumpOperator::from_low_space(ground, "H_b");
    prep.e1 = -1.0;
    prep.delta1 = 2.0 / n;
    prep.e2 = 0.5 * (s.e_b + s.e_excited);
    prep.delta2 = gap;
    prep.delta = delta;
    prep.kappa1 = 1.0;
    prep.kappa2 = 1.0 + b;
    prep.p = std::min(1.0, s.overlap_plus * s.overlap_plus) * (1.0 - 1e-9);
    const auto plus = plus_state(op.dim());
    run.prepare = simulate_jump(prep, plus);

    const double abs_star = std::abs(land->e_star);
    std::vector<double> normalized(land->values.size());
    double e2 = -1.0;
    for (std::size_t z = 0; z < normalized.size(); ++z) normalized[z] = land->values[z] / abs_star;
    for (Assignment z : land->optimal) e2 = std::max(e2, normalized[z]);

    JumpSpec amp;
    amp.k1 = prep.k2;
    amp.k2 = JumpOperator::computational_diagonal(std::move(normalized), "H/|E*|");
    amp.e1 = prep.e2;
    amp.delta1 = gap;
    amp.e2 = e2;
    amp.delta = delta;
    amp.kappa1 = 1.0 + b;
    amp.kappa2 = 1.0;
    double weight = 0.0;
    for (Assignment z : land->optimal) weight += run.prepare.state[z] * run.prepare.state[z];
    amp.p = std::min(1.0, weight) * (1.0 - 1e-9);
    run.amplify = simulate_jump(amp, run.prepare.state);

    CounterRng rng(seed, 0);
    double u = rng.uniform();
    const auto& st = run.amplify.state;
    run.z_out = 0;
    for (std::size_t z = 0; z < st.size(); ++z) {
        const double w = st[z] * st[z];
        if (w <= 0.0) continue;
        run.z_out = z;
        if (u < w) break;
        u -= w;
    }
    run.value_out = land->values[run.z_out];
    run.optimal = std::find(land->optimal.begin(), land->optimal.end(), run.z_out) != land->optimal.end();
    run.total_cost = run.prepare.query_cost + run.amplify.query_cost;
    run.overlap_sum = 1.0 / s.overlap_plus + 1.0 / s.overlap_opt;
    return run;
}

EstarSearch estimate_Estar_binary_search(std::shared_ptr<const Landscape> land,
                                         const EstarSearchOptions& opts, std::uint64_t seed) {
    const auto& values = land->values;
    EstarSearch out;
    double mean_abs = 0.0, max_abs = 0.0;
    for (double v : values) {
        mean_abs += std::abs(v);
        max_abs = std::max(max_abs, std::abs(v));
    }
    mean_abs /= static_cast<double>(values.size());
    // A zero-mean cost has E[max(0,-H)] = mean|H|/2 <= |E*|.
    out.q = opts.q > 0.0 ? opts.q : 0.5 * mean_abs;
    out.Q = opts.Q > 0.0 ? opts.Q : max_abs;
    if (!(out.q > 0.0 && out.Q >= out.q)) throw ParameterError("need 0 < q <= Q");
    if (opts.epsilon > 0.0) {
        out.epsilon = opts.epsilon;
    } else {
        std::vector<double> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        double sep = 0.0;
        for (double v : sorted)
            if (v - sorted.front() > 1e-12 * std::max(1.0, std::abs(sorted.front()))) {
                sep = v - sorted.front();
                break;
            }
        if (!(sep > 0.0)) throw ParameterError("cost has a single level");
        out.epsilon = sep;
    }
    if (opts.theta_points < 1 || opts.phi_points < 1) throw ParameterError("empty grid");

    std::vector<std::pair<double, double>> grid;
    for (int i = 0; i < opts.theta_points; ++i) {
        const double theta = opts.theta_points == 1 ? 0.5 : static_cast<double>(i) / (opts.theta_points - 1);
        for (int j = 0; j < opts.phi_points; ++j) {
            const double phi = opts.phi_points == 1
                                   ? out.Q / out.q
                                   : (out.Q / out.q) * static_cast<double>(j) / (opts.phi_points - 1);
            grid.emplace_back(theta, phi);
        }
    }
    grid.insert(grid.end(), opts.extra_points.begin(), opts.extra_points.end());

    const double nan = std::numeric_limits<double>::quiet_NaN();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < grid.size(); ++g) {
        GridpointLog entry;
        entry.theta = grid[g].first;
        entry.phi = grid[g].second;
        entry.estimate = nan;
        const HbOperator op = HbOperator::theta_phi(land, entry.theta, entry.phi, out.Q);
        SolveOptions so = opts.solve;
        so.seed = derive_seed(seed, g);
        const SpectralSummary s = ground_state(op, so);
        entry.prepare_prob = s.overlap_plus * s.overlap_plus;
        entry.prepared = entry.prepare_prob >= opts.p_min;
        if (entry.prepared) {
            CounterRng rng(seed, 1000 + g);
            double lo = -out.Q * (1.0 + 1e-12);
            double hi = 0.0;
            Assignment witness = 0;
            bool have = false;
            constexpr int kMaxIterations = 200;
            while (hi - lo >= out.epsilon && entry.iterations < kMaxIterations) {
                const double u = 0.5 * (lo + hi);
                ++entry.iterations;
                double weight = 0.0;
                for (std::size_t z = 0; z < values.size(); ++z)
                    if (values[z] <= u) weight += s.psi[z] * s.psi[z];
                if (weight < opts.p_min) {
                    lo = u;
                    continue;
                }
                double r = rng.uniform() * weight;
                Assignment pick = 0;
                for (std::size_t z = 0; z < values.size(); ++z) {
                    if (values[z] > u) continue;
                    pick = z;
                    const double w = s.psi[z] * s.psi[z];
                    if (r < w) break;
                    r -= w;
                }
                hi = values[pick];
                witness = pick;
                have = true;
            }
            entry.found = have;
            if (have) {
                entry.estimate = hi;
                if (hi < best) {
                    best = hi;
                    out.witness = witness;
                }
            }
        }
        out.max_iterations = std::max(out.max_iterations, entry.iterations);
        out.log.push_back(entry);
    }
    out.success = std::isfinite(best);
    out.estimate = out.success ? best : nan;
    return out;
}

double max_distinct_estar(int k, int m) {
    if (k < 1 || k > 5 || m < 1) throw ParameterError("requires 1 <= k <= 5 and m >= 1");
    double f = 1.0;
    for (int i = 2; i < (1 << k); ++i) f *= i;
    return f * m;
}

BaselineResult classical_baseline(const Landscape& land, double eta, std::uint64_t budget,
                                  std::uint64_t seed) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterError("eta must lie in [0,1]");
    const double threshold = (1.0 - eta) * land.e_star;
    const double slack = 1e-9 * std::max(1.0, std::abs(land.e_star));
    const int n = log2_dim(land.dim());
    CounterRng rng(seed, 0);
    BaselineResult r;
    r.best_value = std::numeric_limits<double>::infinity();
    while (r.samples < budget) {
        const Assignment z = n == 0 ? 0 : rng.below(land.dim());
        ++r.samples;
        if (land.values[z] < r.best_value) {
            r.best_value = land.values[z];
            r.best = z;
        }
        if (land.values[z] <= threshold + slack) {
            r.success = true;
            break;
        }
    }
    return r;
}

}  // namespace shortpath
