#include "shortpath/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Core>
#include <boost/math/distributions/students_t.hpp>
#include <boost/version.hpp>

#include "shortpath/algo.hpp"
#include "shortpath/error.hpp"
#include "shortpath/parallel.hpp"
#include "shortpath/rng.hpp"
#include "shortpath/transform.hpp"

namespace shortpath {

namespace {

SolveMethod parse_method(const std::string& m) {
    if (m == "auto") return SolveMethod::Auto;
    if (m == "dense") return SolveMethod::Dense;
    if (m == "lanczos") return SolveMethod::Lanczos;
    throw ParameterError("unknown solver method: " + m);
}

std::string bits(Assignment z, int n) {
    std::string s(static_cast<std::size_t>(n), '+');
    for (int i = 0; i < n; ++i)
        if ((z >> i) & 1U) s[static_cast<std::size_t>(i)] = '-';
    return s;
}

std::string fmt(double v) { return format_double(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

std::vector<std::pair<int, int>> tasks_for(const ExperimentConfig& c) {
    std::vector<std::pair<int, int>> t;
    for (int n : n_values(c))
        for (int i = 0; i < c.instances; ++i) t.emplace_back(n, i);
    return t;
}

double effective_tol(const ExperimentConfig& c, int n) {
    if (c.tol > 0.0) return c.tol;
    return resolve_method(parse_method(c.method), n) == SolveMethod::Dense ? kDenseTol : kLanczosTol;
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.kind = j.value("kind", c.kind);
    c.ensemble = j.value("ensemble", c.ensemble);
    c.n = j.value("n", c.n);
    if (j.contains("n_range")) {
        const auto& r = j.at("n_range");
        if (!r.is_array() || r.size() != 2) throw ParameterError("n_range must be [min, max]");
        c.n_min = r[0].get<int>();
        c.n_max = r[1].get<int>();
    }
    c.k = j.value("k", c.k);
    c.m = j.value("m", c.m);
    c.s = j.value("s", c.s);
    c.eta = j.value("eta", c.eta);
    c.b = j.value("b", c.b);
    if (j.contains("b_grid")) {
        const auto& g = j.at("b_grid");
        if (g.is_array()) {
            c.b_grid = g.get<std::vector<double>>();
        } else {
            const double start = g.value("start", 0.0), stop = g.value("stop", 1.0),
                         step = g.value("step", 0.01);
            if (!(step > 0.0)) throw ParameterError("b_grid step must be positive");
            const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
            for (long i = 0; i < count; ++i) c.b_grid.push_back(start + static_cast<double>(i) * step);
        }
    }
    c.instances = j.value("instances", c.instances);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.tol = j.value("tol", c.tol);
    c.method = j.value("method", c.method);
    c.threads = j.value("threads", c.threads);
    c.short_path = j.value("short_path", c.short_path);
    c.mu = j.value("mu", c.mu);
    c.output = j.value("output", c.output);
    if (c.instances < 1) throw ParameterError("instances must be positive");
    parse_method(c.method);
    return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["kind"] = c.kind;
    j["ensemble"] = c.ensemble;
    j["n"] = c.n;
    if (c.n_min > 0 && c.n_max > 0) j["n_range"] = {c.n_min, c.n_max};
    j["k"] = c.k;
    j["m"] = c.m;
    j["s"] = c.s;
    j["eta"] = c.eta;
    j["b"] = c.b;
    j["b_grid"] = b_values(c);
    j["instances"] = c.instances;
    j["master_seed"] = c.master_seed;
    j["tol"] = c.tol;
    j["method"] = c.method;
    j["threads"] = c.threads;
    j["short_path"] = c.short_path;
    j["mu"] = c.mu;
    j["output"] = c.output;
    return j;
}

std::vector<int> n_values(const ExperimentConfig& c) {
    if (c.n_min > 0 && c.n_max > 0) {
        if (c.n_max < c.n_min) throw ParameterError("empty n_range");
        std::vector<int> v;
        for (int n = c.n_min; n <= c.n_max; ++n) v.push_back(n);
        return v;
    }
    return {c.n};
}

std::vector<double> b_values(const ExperimentConfig& c) {
    if (!c.b_grid.empty()) return c.b_grid;
    std::vector<double> g;
    for (int i = 0; i <= 100; ++i) g.push_back(i / 100.0);
    return g;
}

SolveOptions solve_options(const ExperimentConfig& c, std::uint64_t seed) {
    SolveOptions o;
    o.method = parse_method(c.method);
    o.tol = c.tol;
    o.seed = seed;
    return o;
}

std::uint64_t instance_seed(std::uint64_t master_seed, int n, int index) {
    return derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(n)),
                       static_cast<std::uint64_t>(index));
}

int default_m(const std::string& ensemble, int n, int k) {
    (void)k;
    if (ensemble == "e_k_lin2") return 2 * n;
    if (ensemble == "k_csp" || ensemble == "k_cnf") return 4 * n;
    return 0;
}

CostFunction make_instance(const ExperimentConfig& c, int n, int index) {
    const std::uint64_t seed = instance_seed(c.master_seed, n, index);
    const int m = c.m > 0 ? c.m : default_m(c.ensemble, n, c.k);
    if (c.ensemble == "k_spin") return sample_k_spin(n, c.k, seed);
    if (c.ensemble == "e_k_lin2") return sample_e_k_lin2(n, c.k, m, seed);
    if (c.ensemble == "qubo") return sample_qubo(n, seed);
    if (c.ensemble == "k_csp") return sample_random_kcsp(n, c.k, m, c.s > 0 ? c.s : 1 << (c.k - 1), seed);
    if (c.ensemble == "k_cnf") return sample_random_kcnf(n, c.k, m, seed);
    throw ParameterError("unknown ensemble: " + c.ensemble);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::str() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot open " + path + " for writing");
    f << text;
    if (!f) throw ParameterError("write failed: " + path);
}

CsvTable spectrum_scan(const ExperimentConfig& c) {
    CsvTable t;
    t.header = {"master_seed", "instance", "n", "k", "eta", "b", "e0", "e1", "e2", "tol", "status"};
    const auto tasks = tasks_for(c);
    const auto grid = b_values(c);
    std::vector<std::vector<std::vector<std::string>>> out(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto [n, idx] = tasks[ti];
        auto land = Landscape::from_cost(make_instance(c, n, idx));
        const double tol = effective_tol(c, n);
        for (double b : grid) {
            std::vector<double> ev(3, std::numeric_limits<double>::quiet_NaN());
            std::string status = "ok";
            try {
                HbOperator op(land, c.eta, b);
                const auto e = lowest_eigenvalues(op, 3, solve_options(c, instance_seed(c.master_seed, n, idx)));
                std::copy(e.begin(), e.end(), ev.begin());
            } catch (const ConvergenceError& e) {
                status = "no_convergence";
            }
            out[ti].push_back({fmt(c.master_seed), fmt(idx), fmt(n), fmt(c.k), fmt(c.eta), fmt(b),
                               fmt(ev[0]), fmt(ev[1]), fmt(ev[2]), fmt(tol), status});
        }
    });
    for (auto& rows : out)
        for (auto& r : rows) t.rows.push_back(std::move(r));
    return t;
}

CsvTable overlap_scan(const ExperimentConfig& c) {
    CsvTable t;
    t.header = {"master_seed", "instance", "n", "k", "eta", "b", "e_b", "overlap_plus",
                "overlap_zstar", "overlap_opt", "plus_zstar", "tol", "status"};
    const auto tasks = tasks_for(c);
    const auto grid = b_values(c);
    std::vector<std::vector<std::vector<std::string>>> out(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto [n, idx] = tasks[ti];
        auto land = Landscape::from_cost(make_instance(c, n, idx));
        const double tol = effective_tol(c, n);
        const double plus_z = std::pow(2.0, -0.5 * n);
        for (double b : grid) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            double eb = nan, op_ = nan, oz = nan, oo = nan;
            std::string status = "ok";
            try {
                HbOperator op(land, c.eta, b);
                const auto s = ground_state(op, solve_options(c, instance_seed(c.master_seed, n, idx)));
                eb = s.e_b;
                op_ = s.overlap_plus;
                oz = s.max_overlap_zstar();
                oo = s.overlap_opt;
            } catch (const ConvergenceError& e) {
                status = "no_convergence";
            }
            out[ti].push_back({fmt(c.master_seed), fmt(idx), fmt(n), fmt(c.k), fmt(c.eta), fmt(b),
                               fmt(eb), fmt(op_), fmt(oz), fmt(oo), fmt(plus_z), fmt(tol), status});
        }
    });
    for (auto& rows : out)
        for (auto& r : rows) t.rows.push_back(std::move(r));
    return t;
}

FitResult fit_exponential(const std::vector<std::pair<double, double>>& points, double level) {
    if (points.size() < 3) throw ParameterError("fit needs at least three points");
    if (!(level > 0.0 && level < 1.0)) throw ParameterError("confidence level must lie in (0,1)");
    const double N = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> y;
    for (const auto& [x, v] : points) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("fit values must be positive and finite");
        y.push_back(std::log2(v));
        mx += x;
        my += y.back();
    }
    mx /= N;
    my /= N;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        sxx += (points[i].first - mx) * (points[i].first - mx);
        sxy += (points[i].first - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw ParameterError("fit needs at least two distinct n");
    FitResult f;
    f.points = static_cast<int>(points.size());
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.prefactor = std::exp2(f.intercept);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * points[i].first);
        f.residual += r * r;
    }
    f.slope_se = std::sqrt(f.residual / (N - 2.0) / sxx);
    const boost::math::students_t dist(N - 2.0);
    const double q = boost::math::quantile(dist, 0.5 + level / 2.0);
    f.ci_low = f.slope - q * f.slope_se;
    f.ci_high = f.slope + q * f.slope_se;
    return f;
}

ScalingResult scaling_study(const ExperimentConfig& c) {
    ScalingResult res;
    const auto tasks = tasks_for(c);
    res.records.resize(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto [n, idx] = tasks[ti];
        ScalingRecord& r = res.records[ti];
        r.n = n;
        r.index = idx;
        r.seed = instance_seed(c.master_seed, n, idx);
        try {
            auto land = Landscape::from_cost(make_instance(c, n, idx));
            HbOperator op(land, c.eta, c.b);
            r.summary = ground_state(op, solve_options(c, r.seed));
            r.large_excited_energy = check_large_excited_energy(r.summary);
            r.small_ground_energy_shift =
                check_small_ground_energy_shift(r.summary.e_b, n, r.summary.tol);
            const double ov = r.summary.max_overlap_zstar();
            r.inverse_overlap = ov > 0.0 ? 1.0 / ov : std::numeric_limits<double>::infinity();
            r.excluded = !r.large_excited_energy.holds();
            if (r.excluded) r.status = "excluded_large_excited_energy";
        } catch (const ConvergenceError&) {
            r.excluded = true;
            r.status = "no_convergence";
        }
    });
    res.table.header = {"master_seed", "instance", "n", "k", "eta", "b", "seed", "e_b", "e_excited",
                        "large_excited_energy", "large_excited_energy_margin", "small_ground_energy_shift",
                        "small_ground_energy_shift_margin",
                        "overlap_plus", "overlap_zstar", "inverse_overlap", "excluded", "tol",
                        "method", "status"};
    for (const auto& r : res.records) {
        const auto& s = r.summary;
        res.table.rows.push_back({fmt(c.master_seed), fmt(r.index), fmt(r.n), fmt(c.k), fmt(c.eta),
                                  fmt(c.b), fmt(r.seed), fmt(s.e_b), fmt(s.e_excited),
                                  to_string(r.large_excited_energy.verdict),
                                  fmt(r.large_excited_energy.margin),
                                  to_string(r.small_ground_energy_shift.verdict),
                                  fmt(r.small_ground_energy_shift.margin), fmt(s.overlap_plus),
                                  fmt(s.max_overlap_zstar()), fmt(r.inverse_overlap),
                                  r.excluded ? "1" : "0", fmt(s.tol), s.method, r.status});
        if (r.excluded) ++res.excluded;
    }
    res.median_table.header = {"master_seed", "n", "median_inverse_overlap", "included", "excluded"};
    for (int n : n_values(c)) {
        std::vector<double> v;
        int ex = 0;
        for (const auto& r : res.records) {
            if (r.n != n) continue;
            if (r.excluded) {
                ++ex;
            } else {
                v.push_back(r.inverse_overlap);
            }
        }
        const double med = v.empty() ? std::numeric_limits<double>::quiet_NaN() : median(v);
        if (!v.empty()) res.medians.emplace_back(n, med);
        res.median_table.rows.push_back({fmt(c.master_seed), fmt(n), fmt(med),
                                         fmt(static_cast<int>(v.size())), fmt(ex)});
    }
    if (res.medians.size() >= 3) res.fit = fit_exponential(res.medians);
    return res;
}

std::vector<ConditionsRecord> conditions_sweep(const ExperimentConfig& c) {
    const auto tasks = tasks_for(c);
    const auto grid = b_values(c);
    std::vector<ConditionsRecord> out(tasks.size() * grid.size());
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto [n, idx] = tasks[ti];
        auto land = Landscape::from_cost(make_instance(c, n, idx));
        const auto opts = solve_options(c, instance_seed(c.master_seed, n, idx));
        for (std::size_t bi = 0; bi < grid.size(); ++bi) {
            ConditionsRecord& r = out[ti * grid.size() + bi];
            r.n = n;
            r.index = idx;
            r.report.b = grid[bi];
            r.report.eta = c.eta;
            try {
                HbOperator op(land, c.eta, grid[bi]);
                const auto s = ground_state(op, opts);
                r.report = evaluate_conditions(op, s, c.short_path, opts);
            } catch (const ConvergenceError&) {
                r.status = "no_convergence";
            }
        }
    });
    return out;
}

CsvTable conditions_table(const ExperimentConfig& c, const std::vector<ConditionsRecord>& recs) {
    CsvTable t;
    t.header = {"master_seed", "instance", "n", "k", "eta", "b", "e_b", "e_excited", "e_deflated",
                "large_excited_energy", "large_excited_energy_margin", "small_ground_energy_shift",
                "small_ground_energy_shift_margin", "short_path", "short_path_margin", "tol", "status"};
    for (const auto& r : recs) {
        const auto& p = r.report;
        t.rows.push_back({fmt(c.master_seed), fmt(r.index), fmt(r.n), fmt(c.k), fmt(p.eta), fmt(p.b),
                          fmt(p.e_b), fmt(p.e_excited), fmt(p.e_deflated),
                          to_string(p.large_excited_energy.verdict), fmt(p.large_excited_energy.margin),
                          to_string(p.small_ground_energy_shift.verdict),
                          fmt(p.small_ground_energy_shift.margin),
                          c.short_path ? to_string(p.short_path.verdict) : "not_computed",
                          fmt(p.short_path.margin), fmt(p.tol), r.status});
    }
    return t;
}

double ensemble_alpha(const ExperimentConfig& c, const CostFunction& cost, double e_star, int n) {
    if (c.ensemble == "k_spin" || c.ensemble == "e_k_lin2") return 2.0 * c.k / n;
    if (c.ensemble == "k_csp" || c.ensemble == "k_cnf") {
        const auto& csp = std::get<CspCost>(cost);
        const double m = static_cast<double>(csp.clauses().size());
        return (m / std::abs(e_star)) * c.k * std::ldexp(1.0, c.k) / ((1.0 - c.eta) * n);
    }
    throw UnsupportedReduction("no depolarizing constant for ensemble " + c.ensemble);
}

std::vector<BoundsRecord> bounds_suite(const ExperimentConfig& c) {
    const auto tasks = tasks_for(c);
    std::vector<double> grid = c.b_grid.empty() ? std::vector<double>{c.b} : c.b_grid;
    std::vector<BoundsRecord> out(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t ti) {
        const auto [n, idx] = tasks[ti];
        BoundsRecord& r = out[ti];
        r.n = n;
        r.index = idx;
        const CostFunction cost = make_instance(c, n, idx);
        auto land = Landscape::from_cost(cost);
        const auto opts = solve_options(c, instance_seed(c.master_seed, n, idx));
        r.alpha = ensemble_alpha(c, cost, land->e_star, n);
        for (double b : grid) {
            HbOperator op(land, c.eta, b);
            const auto s = ground_state(op, opts);
            const auto rep = evaluate_conditions(op, s, false, opts);
            r.b = b;
            r.conditions = rep;
            r.runtime = runtime_estimate(s);
            if (!rep.both_hold()) continue;
            r.conditions_hold = true;
            r.lemma = check_lemma_overlap_Pl(s, op, rep, c.mu);
            r.lemma_checked = true;
            try {
                r.agsp = check_agsp_bound(s, op, rep, r.alpha);
                r.agsp_applicable = true;
            } catch (const BoundNotApplicable& e) {
                r.agsp_reason = e.what();
            }
            break;
        }
    });
    return out;
}

CsvTable bounds_table(const ExperimentConfig& c, const std::vector<BoundsRecord>& recs) {
    CsvTable t;
    t.header = {"master_seed", "instance", "n", "k", "eta", "b", "alpha", "conditions_hold", "L",
                "lemma_pass", "lemma_pass_L", "lemma_pass_L1", "lemma_margin", "lemma_margin_L",
                "lemma_margin_L1",
                "agsp_applicable", "agsp_measured_zstar", "agsp_bound_zstar", "agsp_worst_ratio",
                "runtime_quantity", "runtime_bound", "tol"};
    for (const auto& r : recs) {
        const auto yes = [](bool v) { return std::string(v ? "1" : "0"); };
        t.rows.push_back({fmt(c.master_seed), fmt(r.index), fmt(r.n), fmt(c.k), fmt(c.eta), fmt(r.b),
                          fmt(r.alpha), yes(r.conditions_hold), fmt(static_cast<int>(r.lemma.L)),
                          yes(r.lemma.passes()), yes(r.lemma.passes_L), yes(r.lemma.passes_L1),
                          fmt(r.lemma.worst_margin), fmt(r.lemma.worst_margin_L),
                          fmt(r.lemma.worst_margin_L1), yes(r.agsp_applicable),
                          fmt(r.agsp.measured_zstar), fmt(r.agsp.bound_zstar), fmt(r.agsp.worst_ratio),
                          fmt(r.runtime.quantity), fmt(r.runtime.bound), fmt(r.conditions.tol)});
    }
    return t;
}

CsvTable speedup_table(const ExperimentConfig& c) {
    CsvTable t;
    t.header = {"problem", "family", "k", "eta", "bracket", "c", "exponent", "formula"};
    auto add = [&](const std::string& problem, Family f, SpeedupParams p) {
        const auto r = speedup_c(f, p);
        t.rows.push_back({problem, to_string(f), fmt(r.inputs.k), fmt(r.eta), fmt(r.bracket), fmt(r.c),
                          fmt(r.runtime_exponent), "\"" + r.formula + "\""});
    };
    SpeedupParams cnf;
    cnf.k = 3;
    cnf.ratio = 1.0;
    cnf.eta = 0.189;
    add("3-CNF-SAT", Family::MaxKCsp, cnf);
    cnf.eta = std::numeric_limits<double>::quiet_NaN();
    add("3-CNF-SAT (optimized eta)", Family::MaxKCsp, cnf);
    SpeedupParams sk;
    sk.k = 2;
    add("SK model", Family::KSpin, sk);
    SpeedupParams ks;
    ks.k = c.k;
    add(std::to_string(c.k) + "-spin", Family::KSpin, ks);
    return t;
}

CsvTable params_table(const ExperimentConfig& c) {
    CsvTable t;
    t.header = {"quantity", "k", "eta", "value"};
    auto add = [&](const std::string& q, double v) { t.rows.push_back({q, fmt(c.k), fmt(c.eta), fmt(v)}); };
    const double gk = gamma_kspin<double>(c.k, c.eta);
    const double gc = gamma_csp<double>(c.k, 1.0, c.eta);
    add("gamma_kspin", gk);
    add("b_max_kspin", b_max(gk));
    add("gamma_csp", gc);
    add("b_max_csp", b_max(gc));
    SpeedupParams p;
    p.k = c.k;
    p.eta = c.eta;
    add("c_kspin", speedup_c(Family::KSpin, p).c);
    p.ratio = 1.0;
    add("c_csp", speedup_c(Family::MaxKCsp, p).c);
    return t;
}

nlohmann::json run_diagnostics(const ExperimentConfig& c, bool unknown_estar) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& [n, idx] : tasks_for(c)) {
        const std::uint64_t seed = instance_seed(c.master_seed, n, idx);
        const CostFunction cost = make_instance(c, n, idx);
        auto land = Landscape::from_cost(cost);
        const auto opts = solve_options(c, seed);
        nlohmann::json j;
        j["instance"] = idx;
        j["n"] = n;
        j["seed"] = seed;
        j["e_star"] = land->e_star;
        j["optima"] = land->optimal.size();
        if (unknown_estar) {
            EstarSearchOptions so;
            so.solve = opts;
            if (const auto* csp = std::get_if<CspCost>(&cost))
                so.epsilon = 1.0 / static_cast<double>(csp->denominator());
            const auto est = estimate_Estar_binary_search(land, so, seed);
            nlohmann::json e;
            e["success"] = est.success;
            e["estimate"] = est.estimate;
            e["matches"] = est.success && est.estimate == land->e_star;
            e["max_iterations"] = est.max_iterations;
            e["gridpoints"] = est.log.size();
            e["q"] = est.q;
            e["Q"] = est.Q;
            e["epsilon"] = est.epsilon;
            j["estar_search"] = e;
        }
        try {
            const auto r = run_algorithm_1(land, c.eta, c.b, seed, opts);
            j["z_out"] = bits(r.z_out, n);
            j["value_out"] = r.value_out;
            j["optimal"] = r.optimal;
            j["e_b"] = r.summary.e_b;
            j["e_excited"] = r.summary.e_excited;
            j["overlap_plus"] = r.summary.overlap_plus;
            j["overlap_zstar"] = r.summary.max_overlap_zstar();
            j["overlap_opt"] = r.summary.overlap_opt;
            j["large_excited_energy"] = to_string(r.conditions.large_excited_energy.verdict);
            j["small_ground_energy_shift"] = to_string(r.conditions.small_ground_energy_shift.verdict);
            j["prepare"] = {{"success_prob", r.prepare.success_prob},
                            {"rounds", r.prepare.amplification_rounds},
                            {"cost", r.prepare.query_cost}};
            j["amplify"] = {{"success_prob", r.amplify.success_prob},
                            {"rounds", r.amplify.amplification_rounds},
                            {"cost", r.amplify.query_cost}};
            j["total_cost"] = r.total_cost;
            j["overlap_sum"] = r.overlap_sum;
            j["warning"] = r.warning;
        } catch (const JumpAssumptionViolated& e) {
            j["error"] = e.what();
        }
        runs.push_back(j);
    }
    nlohmann::json out;
    out["config"] = to_json(c);
    out["runs"] = runs;
    return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string run_experiment(const ExperimentConfig& c, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    set_thread_count(c.threads);
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    const bool is_run = c.kind == "run";
    const std::string name = c.output.empty() ? c.kind + (is_run ? ".json" : ".csv") : c.output;
    const std::string path = (dir / name).string();
    nlohmann::json extra;
    if (c.kind == "spectrum-scan") {
        write_text(path, spectrum_scan(c).str());
    } else if (c.kind == "overlap-scan") {
        write_text(path, overlap_scan(c).str());
    } else if (c.kind == "scaling") {
        const auto r = scaling_study(c);
        write_text(path, r.table.str());
        const std::string mpath = (dir / (std::filesystem::path(name).stem().string() + "_medians.csv")).string();
        write_text(mpath, r.median_table.str());
        extra["medians"] = mpath;
        extra["excluded"] = r.excluded;
        if (r.fit.points >= 3)
            extra["fit"] = {{"slope", r.fit.slope},       {"intercept", r.fit.intercept},
                            {"prefactor", r.fit.prefactor}, {"ci_low", r.fit.ci_low},
                            {"ci_high", r.fit.ci_high},   {"residual", r.fit.residual}};
    } else if (c.kind == "conditions") {
        write_text(path, conditions_table(c, conditions_sweep(c)).str());
    } else if (c.kind == "bounds") {
        write_text(path, bounds_table(c, bounds_suite(c)).str());
    } else if (c.kind == "table") {
        write_text(path, speedup_table(c).str());
    } else if (c.kind == "params") {
        write_text(path, params_table(c).str());
    } else if (is_run) {
        write_text(path, run_diagnostics(c, false).dump(2) + "\n");
    } else {
        throw ParameterError("unknown experiment kind: " + c.kind);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const nlohmann::json cfg = to_json(c);
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
    nlohmann::json manifest;
    manifest["config"] = cfg;
    manifest["config_hash"] = hash;
    manifest["output"] = path;
    manifest["wall_time_s"] = wall;
    manifest["versions"] = {{"shortpath", SHORTPATH_VERSION},
                            {"compiler", __VERSION__},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                          std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                          std::to_string(EIGEN_MINOR_VERSION)},
                            {"boost", BOOST_LIB_VERSION}};
    if (!extra.empty()) manifest["summary"] = extra;
    write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");
    return path;
}

}  // namespace shortpath
