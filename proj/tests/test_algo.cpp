#include <doctest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "shortpath/algo.hpp"
#include "shortpath/error.hpp"
#include "shortpath/rng.hpp"
#include "shortpath/transform.hpp"

using namespace shortpath;

namespace {

SolveOptions dense() {
    SolveOptions o;
    o.method = SolveMethod::Dense;
    return o;
}

std::vector<double> random_unit(std::size_t dim, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    std::vector<double> v(dim);
    double s = 0.0;
    for (auto& x : v) {
        x = rng.normal();
        s += x * x;
    }
    for (auto& x : v) x /= std::sqrt(s);
    return v;
}

// Explicit Hadamard-basis vector |x_H> = H^{(x)n} |x>.
std::vector<double> hadamard_vector(int n, std::size_t x) {
    std::vector<double> v(std::size_t{1} << n);
    const double a = std::pow(2.0, -0.5 * n);
    for (std::size_t z = 0; z < v.size(); ++z) v[z] = (std::popcount(x & z) % 2 ? -a : a);
    return v;
}

}  // namespace

TEST_CASE("jump query cost and amplification rounds") {
    CHECK(amplification_rounds(1.0) == 0);
    CHECK(amplification_rounds(0.25) == 1);
    CHECK(amplification_rounds(1e-4) == static_cast<long>(std::ceil(std::numbers::pi / (4 * std::asin(0.01)) - 0.5)));
    CHECK(std::isinf(jump_query_cost(1.0, 0.0, 0.5, 1e-3)));
    const double c = jump_query_cost(1.0, 0.1, 0.5, 1e-3);
    const double ld = std::log(1e3);
    CHECK(c == doctest::Approx(10.0 / std::sqrt(0.5) * ld * std::log(ld / (std::sqrt(0.5) * 1e-3))));
    // Monotone: larger kappa or smaller gap, p, delta cost more.
    CHECK(jump_query_cost(2.0, 0.1, 0.5, 1e-3) > c);
    CHECK(jump_query_cost(1.0, 0.05, 0.5, 1e-3) > c);
    CHECK(jump_query_cost(1.0, 0.1, 0.1, 1e-3) > c);
    CHECK(jump_query_cost(1.0, 0.1, 0.5, 1e-6) > c);
    CHECK_THROWS_AS(jump_query_cost(1.0, 0.1, 0.0, 1e-3), ParameterError);
}

TEST_CASE("jump projection") {
    const int n = 6;
    const std::size_t dim = std::size_t{1} << n;
    SUBCASE("low space against a dense projector") {
        Eigen::MatrixXd a(dim, 5);
        CounterRng rng(9, 0);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ() *
                                  Eigen::MatrixXd::Identity(dim, 5);
        std::vector<std::vector<double>> basis;
        for (int j = 0; j < 5; ++j) basis.emplace_back(q.col(j).data(), q.col(j).data() + dim);
        const Eigen::MatrixXd proj = q * q.transpose();
        const auto psi = random_unit(dim, 4);
        JumpSpec spec;
        spec.k1 = JumpOperator::transverse_field(n);
        spec.k2 = JumpOperator::from_low_space(basis, "low");
        spec.p = 1e-6;
        const auto r = simulate_jump(spec, psi);
        const Eigen::VectorXd expect = proj * Eigen::Map<const Eigen::VectorXd>(psi.data(), dim);
        CHECK(r.success_prob == doctest::Approx(expect.squaredNorm()).epsilon(1e-12));
        const double s = 1.0 / expect.norm();
        for (std::size_t z = 0; z < dim; ++z) CHECK(std::abs(r.state[z] - s * expect(z)) < 1e-12);
        CHECK(r.query_cost > 0.0);
    }
    SUBCASE("state already in range costs no amplification") {
        auto basis = std::vector<std::vector<double>>{random_unit(dim, 11)};
        JumpSpec spec;
        spec.k1 = JumpOperator::transverse_field(n);
        spec.k2 = JumpOperator::from_low_space(basis, "line");
        spec.p = 1.0 - 1e-12;
        const auto r = simulate_jump(spec, basis[0]);
        CHECK(r.success_prob == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.amplification_rounds == 0);
        for (std::size_t z = 0; z < dim; ++z) CHECK(std::abs(r.state[z] - basis[0][z]) < 1e-12);
    }
    SUBCASE("Hadamard-diagonal threshold matches explicit Hadamard vectors") {
        const auto field = JumpOperator::transverse_field(n);
        JumpSpec spec;
        spec.k1 = JumpOperator::computational_diagonal(std::vector<double>(dim, 0.0));
        spec.k2 = field;
        spec.e2 = -1.0 + 2.0 / n + 1e-9;  // weight <= 1 in the Hadamard basis
        spec.p = 1e-9;
        const auto psi = random_unit(dim, 12);
        const auto r = simulate_jump(spec, psi);
        std::vector<double> expect(dim, 0.0);
        for (std::size_t x = 0; x < dim; ++x) {
            if (std::popcount(x) > 1) continue;
            const auto h = hadamard_vector(n, x);
            const double c = dot(h, psi);
            for (std::size_t z = 0; z < dim; ++z) expect[z] += c * h[z];
        }
        const double w = dot(expect, expect);
        CHECK(r.success_prob == doctest::Approx(w).epsilon(1e-12));
        for (std::size_t z = 0; z < dim; ++z) CHECK(std::abs(r.state[z] - expect[z] / std::sqrt(w)) < 1e-12);
        CHECK(r.query_cost == 0.0);  // both endpoints are classical
    }
    SUBCASE("weight below p is rejected") {
        JumpSpec spec;
        spec.k1 = JumpOperator::transverse_field(n);
        std::vector<double> diag(dim, 1.0);
        diag[0] = -1.0;
        spec.k2 = JumpOperator::computational_diagonal(diag);
        spec.e2 = 0.0;
        spec.p = 0.5;
        CHECK_THROWS_AS(simulate_jump(spec, plus_state(dim)), JumpAssumptionViolated);
    }
}

TEST_CASE("algorithm run on instances meeting both conditions") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto land = Landscape::from_cost(CostFunction(sample_k_spin(8, 3, 300 + seed)));
        std::optional<AlgorithmRun> found;
        for (double b : {0.5, 0.2, 0.1, 0.05, 0.02}) {
            auto run = run_algorithm_1(land, 0.5, b, seed, dense());
            if (run.conditions.both_hold()) {
                found = std::move(run);
                break;
            }
        }
        if (!found) continue;
        const AlgorithmRun& run = *found;
        ++checked;
        CHECK(run.optimal);
        CHECK(run.value_out == land->e_star);
        CHECK(run.warning.empty());
        CHECK(run.amplify.success_prob == doctest::Approx(run.summary.overlap_opt * run.summary.overlap_opt / 1.0).epsilon(1e-9));
        CHECK(std::isfinite(run.total_cost));
    }
    CHECK(checked > 0);
}

TEST_CASE("b = 0 amplification succeeds with probability #opt / 2^n") {
    const int n = 8;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto land = Landscape::from_cost(CostFunction(sample_e_k_lin2(n, 2, 12, seed)));
        const auto run = run_algorithm_1(land, 0.5, 0.0, seed, dense());
        CHECK(run.prepare.success_prob == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(run.amplify.success_prob ==
              doctest::Approx(static_cast<double>(land->optimal.size()) / (1 << n)).epsilon(1e-10));
        CHECK(run.optimal);
    }
}

TEST_CASE("unknown E* search") {
    const int n = 8;
    SUBCASE("CSP with epsilon = 1/D and the known gridpoint") {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            auto land = Landscape::from_cost(CostFunction(sample_random_kcnf(n, 3, 16, seed)));
            EstarSearchOptions o;
            o.solve = dense();
            o.epsilon = 1.0;  // 3-CNF values are integers
            o.theta_points = 3;
            o.phi_points = 3;
            double q_mean = 0.0, q_max = 0.0;
            for (double v : land->values) {
                q_mean += std::abs(v);
                q_max = std::max(q_max, std::abs(v));
            }
            const auto tp = reparameterize(std::abs(land->e_star), 0.5, 0.3, q_max);
            o.extra_points.emplace_back(tp.theta, tp.phi);
            const auto r = estimate_Estar_binary_search(land, o, seed);
            REQUIRE(r.success);
            CHECK(r.estimate == land->e_star);
            CHECK(land->values[r.witness] == r.estimate);
            CHECK(r.log.back().found);
            CHECK(r.log.back().estimate == land->e_star);
            CHECK(r.max_iterations <= std::log2(r.Q / r.epsilon) + 2);
            CHECK(r.q <= std::abs(land->e_star));
            CHECK(r.Q >= std::abs(land->e_star));
        }
    }
    SUBCASE("estimate is always an attained cost at or above E*") {
        auto land = Landscape::from_cost(CostFunction(sample_k_spin(n, 3, 5)));
        EstarSearchOptions o;
        o.solve = dense();
        const auto r = estimate_Estar_binary_search(land, o, 1);
        REQUIRE(r.success);
        CHECK(r.estimate >= land->e_star);
        CHECK(land->values[r.witness] == r.estimate);
        for (const auto& g : r.log) CHECK(g.iterations <= std::log2(r.Q * (1 + 1e-12) / r.epsilon) + 2);
    }
    CHECK(max_distinct_estar(3, 10) == 5040.0 * 10);
    CHECK(max_distinct_estar(1, 4) == 4.0);
}

TEST_CASE("classical baseline") {
    const int n = 10;
    auto land = Landscape::from_cost(CostFunction(sample_k_spin(n, 3, 17)));
    SUBCASE("eta = 1 accepts the first sample") {
        const auto r = classical_baseline(*land, 1.0, 1000, 3);
        CHECK(r.success);
        CHECK(r.samples == 1);
    }
    SUBCASE("eta = 0 needs geometric(#opt / 2^n) samples") {
        const double p = static_cast<double>(land->optimal.size()) / (1 << n);
        double mean = 0.0;
        const int runs = 100;
        for (int s = 0; s < runs; ++s) {
            const auto r = classical_baseline(*land, 0.0, 1u << 20, 100 + s);
            REQUIRE(r.success);
            CHECK(r.best_value == land->e_star);
            mean += static_cast<double>(r.samples);
        }
        mean /= runs;
        // Geometric mean 1/p with standard deviation sqrt(1-p)/p; allow 4 standard errors.
        CHECK(std::abs(mean - 1.0 / p) <= 4.0 * std::sqrt(1.0 - p) / p / std::sqrt(runs));
    }
    SUBCASE("budget exhaustion reports the best seen") {
        const auto r = classical_baseline(*land, 0.0, 1, 5);
        CHECK(r.samples == 1);
        CHECK(r.best_value == land->values[r.best]);
    }
    CHECK_THROWS_AS(classical_baseline(*land, 1.5, 10, 1), ParameterError);
}
