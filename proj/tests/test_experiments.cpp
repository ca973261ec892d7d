#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shortpath/error.hpp"
#include "shortpath/experiments.hpp"
#include "shortpath/rng.hpp"

using namespace shortpath;

namespace {

std::size_t column(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == name) return i;
    FAIL("missing column " << name);
    return 0;
}

double cell(const CsvTable& t, std::size_t row, const std::string& name) {
    return std::stod(t.rows.at(row).at(column(t, name)));
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ExperimentConfig small(const std::string& kind) {
    ExperimentConfig c;
    c.kind = kind;
    c.ensemble = "k_spin";
    c.n = 8;
    c.k = 3;
    c.instances = 2;
    c.master_seed = 42;
    c.b_grid = {0.0, 0.3, 0.7};
    return c;
}

}  // namespace

TEST_CASE("exponential fit") {
    SUBCASE("exact data is recovered") {
        std::vector<std::pair<double, double>> pts;
        for (int n = 10; n <= 20; ++n) pts.emplace_back(n, 3.0 * std::exp2(0.4 * n));
        const auto f = fit_exponential(pts);
        CHECK(std::abs(f.slope - 0.4) < 1e-10);
        CHECK(std::abs(f.prefactor - 3.0) < 1e-9);
        CHECK(f.residual < 1e-20);
        CHECK(f.ci_low <= f.slope);
        CHECK(f.ci_high >= f.slope);
    }
    SUBCASE("constant data has slope zero") {
        const auto f = fit_exponential({{1, 5.0}, {2, 5.0}, {3, 5.0}, {4, 5.0}});
        CHECK(std::abs(f.slope) < 1e-12);
    }
    SUBCASE("noisy data: interval width follows the t quantile") {
        CounterRng rng(3, 0);
        std::vector<std::pair<double, double>> pts;
        for (int n = 15; n <= 20; ++n) pts.emplace_back(n, std::exp2(0.42 * n + 0.05 * rng.normal()));
        const auto f = fit_exponential(pts);
        // t_{0.975, 4} = 2.7764451
        CHECK((f.ci_high - f.slope) / f.slope_se == doctest::Approx(2.7764451).epsilon(1e-6));
        CHECK(std::abs(f.slope - 0.42) < 0.05);
    }
    CHECK_THROWS_AS(fit_exponential({{1, 2.0}, {2, 4.0}}), ParameterError);
    CHECK_THROWS_AS(fit_exponential({{1, 2.0}, {1, 4.0}, {1, 8.0}}), ParameterError);
    CHECK_THROWS_AS(fit_exponential({{1, 2.0}, {2, 0.0}, {3, 8.0}}), ParameterError);
}

TEST_CASE("spectrum scan") {
    auto c = small("spectrum-scan");
    const auto t = spectrum_scan(c);
    REQUIRE(t.rows.size() == 6);
    const int n = c.n;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (cell(t, r, "b") != 0.0) continue;
        CHECK(cell(t, r, "e0") == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(cell(t, r, "e1") == doctest::Approx(-1.0 + 2.0 / n).epsilon(1e-10));
        CHECK(cell(t, r, "e2") == doctest::Approx(-1.0 + 2.0 / n).epsilon(1e-10));
    }
    SUBCASE("dense and Lanczos agree at n = 10") {
        c.n = 10;
        c.instances = 1;
        c.method = "dense";
        const auto d = spectrum_scan(c);
        c.method = "lanczos";
        const auto l = spectrum_scan(c);
        REQUIRE(d.rows.size() == l.rows.size());
        for (std::size_t r = 0; r < d.rows.size(); ++r) {
            CHECK(l.rows[r][column(l, "status")] == "ok");
            for (const char* col : {"e0", "e1", "e2"})
                CHECK(std::abs(cell(d, r, col) - cell(l, r, col)) < 1e-8);
        }
    }
}

TEST_CASE("overlap scan at b = 0") {
    const auto c = small("overlap-scan");
    const auto t = overlap_scan(c);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(cell(t, r, "plus_zstar") == doctest::Approx(std::pow(2.0, -0.5 * c.n)));
        if (cell(t, r, "b") != 0.0) continue;
        CHECK(cell(t, r, "overlap_plus") == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cell(t, r, "overlap_zstar") == doctest::Approx(std::pow(2.0, -0.5 * c.n)).epsilon(1e-10));
    }
}

TEST_CASE("scaling study") {
    ExperimentConfig c = small("scaling");
    c.n_min = 6;
    c.n_max = 9;
    c.instances = 3;
    c.b = 0.5;
    const auto r = scaling_study(c);
    CHECK(r.records.size() == 12);
    CHECK(r.table.rows.size() == 12);
    for (const auto& rec : r.records) {
        CHECK(rec.seed == instance_seed(c.master_seed, rec.n, rec.index));
        CHECK(rec.excluded == !rec.large_excited_energy.holds());
        if (!rec.excluded) CHECK(rec.inverse_overlap >= 1.0);
    }
    CHECK(r.medians.size() <= 4);
    if (r.medians.size() >= 3) CHECK(r.fit.points == static_cast<int>(r.medians.size()));
}

TEST_CASE("seeds are shared across experiments") {
    CHECK(instance_seed(1, 20, 3) == derive_seed(derive_seed(1, 20), 3));
    CHECK(instance_seed(1, 20, 3) != instance_seed(1, 20, 4));
    CHECK(instance_seed(1, 20, 3) != instance_seed(1, 19, 3));
    const auto c = small("conditions");
    CHECK(num_vars(make_instance(c, 8, 1)) == 8);
    const auto a = evaluate_all(make_instance(c, 8, 1));
    const auto b = evaluate_all(make_instance(c, 8, 1));
    CHECK(a == b);
}

TEST_CASE("config parsing") {
    const auto j = nlohmann::json::parse(R"({
        "ensemble": "e_k_lin2", "n_range": [6, 9], "k": 2, "eta": 0.4,
        "b_grid": {"start": 0.1, "stop": 0.3, "step": 0.1}, "instances": 4,
        "master_seed": 7, "method": "dense", "threads": 1, "mu": 3
    })");
    const auto c = config_from_json(j);
    CHECK(c.ensemble == "e_k_lin2");
    CHECK(n_values(c) == std::vector<int>{6, 7, 8, 9});
    REQUIRE(c.b_grid.size() == 3);
    CHECK(c.b_grid[2] == doctest::Approx(0.3));
    CHECK(c.master_seed == 7);
    CHECK(c.mu == 3.0);
    CHECK(default_m("e_k_lin2", 10, 2) == 20);
    CHECK(default_m("k_cnf", 10, 3) == 40);
    const auto back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(b_values(ExperimentConfig{}).size() == 101);
    CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"n_range": [3]})")));
    CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"method": "magic"})")));
    CHECK_THROWS(config_from_json(nlohmann::json::parse(R"({"instances": 0})")));
}

TEST_CASE("bounds suite picks the first passing b") {
    ExperimentConfig c = small("bounds");
    c.ensemble = "e_k_lin2";
    c.k = 2;
    c.n = 8;
    c.instances = 2;
    c.b_grid = {0.2, 0.02};
    const auto recs = bounds_suite(c);
    REQUIRE(recs.size() == 2);
    for (const auto& r : recs) {
        CHECK(r.alpha == doctest::Approx(0.5));
        if (!r.conditions_hold) continue;
        CHECK(r.b == 0.02);
        CHECK(r.lemma_checked);
        CHECK(r.lemma.passes());
        CHECK_FALSE(r.agsp_applicable);  // alpha = 0.5 is not below (1 - b)/2
    }
    c.ensemble = "qubo";
    CHECK_THROWS_AS(ensemble_alpha(c, make_instance(c, 8, 0), -1.0, 8), UnsupportedReduction);
}

TEST_CASE("tables") {
    ExperimentConfig c;
    c.k = 3;
    c.eta = 0.5;
    const auto t = speedup_table(c);
    REQUIRE(t.rows.size() == 4);
    CHECK(std::round(cell(t, 0, "c") * 1e9) == 522.0);
    const auto p = params_table(c);
    CHECK(p.rows.size() == 6);
    CHECK(p.rows[1][0] == "b_max_kspin");
    CHECK(cell(p, 1, "value") == doctest::Approx(1.0259768e-4).epsilon(1e-6));
}

TEST_CASE("outputs are byte identical across runs and carry provenance") {
    const auto dir = std::filesystem::temp_directory_path() / "shortpath_exp_test";
    std::filesystem::remove_all(dir);
    auto c = small("overlap-scan");
    const auto p1 = run_experiment(c, (dir / "a").string());
    c.threads = 2;
    const auto p2 = run_experiment(c, (dir / "b").string());
    CHECK(slurp(p1) == slurp(p2));
    const std::string first = slurp(p1).substr(0, slurp(p1).find('\n'));
    CHECK(first.find("master_seed") != std::string::npos);
    CHECK(first.find("instance") != std::string::npos);
    CHECK(first.find("tol") != std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
    CHECK(manifest["config"]["master_seed"] == 42);
    CHECK(manifest["config_hash"].get<std::string>().size() == 16);
    CHECK(manifest["versions"].contains("compiler"));
    CHECK(manifest["output"] == p1);

    c.kind = "nonsense";
    CHECK_THROWS_AS(run_experiment(c, (dir / "c").string()), ParameterError);
    std::filesystem::remove_all(dir);
}
