#include "shortpath/cost.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "shortpath/error.hpp"
#include "shortpath/rng.hpp"

namespace shortpath {

namespace {

Assignment mask_of(const std::vector<int>& vars, int n, const char* what) {
    if (vars.empty()) throw MalformedInstance(std::string(what) + ": empty variable set");
    Assignment mask = 0;
    for (int v : vars) {
        if (v < 0 || v >= n)
            throw MalformedInstance(std::string(what) + ": variable index " + std::to_string(v) +
                                    " out of range for n=" + std::to_string(n));
        const Assignment bit = Assignment{1} << v;
        if (mask & bit)
            throw MalformedInstance(std::string(what) + ": repeated variable " + std::to_string(v));
        mask |= bit;
    }
    return mask;
}

void check_n(int n) {
    if (n < 1 || n > 63) throw MalformedInstance("variable count must be in [1, 63]");
}

void check_cap(int n, int cap) {
    if (n > cap)
        throw EnumerationCapExceeded("n=" + std::to_string(n) + " exceeds enumeration cap " +
                                     std::to_string(cap));
}

Assignment from_spins(std::span<const int> z, int n) {
    if (static_cast<int>(z.size()) != n) throw MalformedInstance("assignment length mismatch");
    return to_assignment(z);
}

std::uint32_t gather(Assignment x, const std::vector<int>& vars) {
    std::uint32_t local = 0;
    for (std::size_t j = 0; j < vars.size(); ++j)
        local |= static_cast<std::uint32_t>((x >> vars[j]) & 1U) << j;
    return local;
}

}  // namespace

void walsh_hadamard(std::span<double> v) {
    const std::size_t size = v.size();
    for (std::size_t h = 1; h < size; h <<= 1) {
        for (std::size_t i = 0; i < size; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = v[j];
                const double b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

Rational Rational::make(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ParameterError("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    return {num / g, den / g};
}

Assignment to_assignment(std::span<const int> z) {
    Assignment x = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] == -1)
            x |= Assignment{1} << i;
        else if (z[i] != 1)
            throw MalformedInstance("assignment entries must be +1 or -1");
    }
    return x;
}

// ---- PolyCost ----

PolyCost::PolyCost(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
    check_n(n);
    bool nonzero = false;
    masks_.reserve(terms_.size());
    for (const auto& t : terms_) {
        masks_.push_back(mask_of(t.vars, n, "term"));
        if (!std::isfinite(t.coeff)) throw MalformedInstance("term coefficient is not finite");
        nonzero = nonzero || t.coeff != 0.0;
    }
    if (!nonzero) throw MalformedInstance("degenerate instance: H is identically zero");
}

int PolyCost::degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.vars.size()));
    return d;
}

double PolyCost::evaluate(Assignment x) const {
    double h = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t)
        h += (std::popcount(x & masks_[t]) & 1) ? -terms_[t].coeff : terms_[t].coeff;
    return h;
}

double PolyCost::evaluate(std::span<const int> z) const { return evaluate(from_spins(z, n_)); }

std::vector<double> PolyCost::evaluate_all_direct() const {
    const std::size_t size = std::size_t{1} << n_;
    std::vector<double> out(size);
    for (std::size_t x = 0; x < size; ++x) out[x] = evaluate(x);
    return out;
}

std::vector<double> PolyCost::evaluate_all() const {
    const std::size_t size = std::size_t{1} << n_;
    if (static_cast<double>(terms_.size()) * static_cast<double>(size) <= 0x1.0p27)
        return evaluate_all_direct();
    std::vector<double> v(size, 0.0);
    for (std::size_t t = 0; t < terms_.size(); ++t) v[masks_[t]] += terms_[t].coeff;
    walsh_hadamard(v);
    return v;
}

// ---- CspCost ----

CspCost::CspCost(int n, std::vector<Clause> clauses) : n_(n), clauses_(std::move(clauses)) {
    check_n(n);
    if (clauses_.empty()) throw MalformedInstance("degenerate instance: no clauses, H is identically zero");
    std::vector<std::int64_t> unsat_den;
    for (auto& c : clauses_) {
        masks_.push_back(mask_of(c.vars, n, "clause"));
        const int k = static_cast<int>(c.vars.size());
        if (k > 6) throw MalformedInstance("clause arity above 6 is not supported");
        const std::uint32_t patterns = 1U << k;
        std::uint64_t bits = 0;
        for (auto p : c.satisfying) {
            if (p >= patterns) throw MalformedInstance("satisfying pattern out of range");
            if (bits & (std::uint64_t{1} << p)) throw MalformedInstance("repeated satisfying pattern");
            bits |= std::uint64_t{1} << p;
        }
        const auto s = static_cast<std::int64_t>(c.satisfying.size());
        if (s < 1 || s > static_cast<std::int64_t>(patterns) - 1)
            throw MalformedInstance("satisfying-set size must be in [1, 2^k - 1]");
        std::sort(c.satisfying.begin(), c.satisfying.end());
        sat_bits_.push_back(bits);
        unsat_den.push_back(static_cast<std::int64_t>(patterns) - s);
    }
    den_ = 1;
    for (auto d : unsat_den) {
        den_ = std::lcm(den_, d);
        if (den_ > (std::int64_t{1} << 40)) throw MalformedInstance("clause denominators overflow");
    }
    for (std::size_t t = 0; t < clauses_.size(); ++t) {
        const auto s = static_cast<std::int64_t>(clauses_[t].satisfying.size());
        unsat_scaled_.push_back(s * (den_ / unsat_den[t]));
    }
}

int CspCost::max_arity() const {
    int k = 0;
    for (const auto& c : clauses_) k = std::max(k, static_cast<int>(c.vars.size()));
    return k;
}

Rational CspCost::unsatisfied_value(std::size_t t) const {
    const auto& c = clauses_.at(t);
    const auto s = static_cast<std::int64_t>(c.satisfying.size());
    return Rational::make(s, (std::int64_t{1} << c.vars.size()) - s);
}

std::int64_t CspCost::scaled(Assignment x) const {
    std::int64_t h = 0;
    for (std::size_t t = 0; t < clauses_.size(); ++t) {
        const auto local = gather(x, clauses_[t].vars);
        h += ((sat_bits_[t] >> local) & 1U) ? -den_ : unsat_scaled_[t];
    }
    return h;
}

Rational CspCost::evaluate_exact(Assignment x) const { return Rational::make(scaled(x), den_); }

double CspCost::evaluate(Assignment x) const {
    return static_cast<double>(scaled(x)) / static_cast<double>(den_);
}

double CspCost::evaluate(std::span<const int> z) const { return evaluate(from_spins(z, n_)); }

std::vector<std::int64_t> CspCost::evaluate_all_scaled() const {
    const std::size_t size = std::size_t{1} << n_;
    std::vector<std::int64_t> out(size, 0);
    for (std::size_t t = 0; t < clauses_.size(); ++t) {
        const auto& vars = clauses_[t].vars;
        const std::int64_t sat = -den_;
        const std::int64_t unsat = unsat_scaled_[t];
        const std::uint64_t bits = sat_bits_[t];
        for (std::size_t x = 0; x < size; ++x)
            out[x] += ((bits >> gather(x, vars)) & 1U) ? sat : unsat;
    }
    return out;
}

std::vector<double> CspCost::evaluate_all() const {
    const auto s = evaluate_all_scaled();
    std::vector<double> out(s.size());
    const auto d = static_cast<double>(den_);
    for (std::size_t x = 0; x < s.size(); ++x) out[x] = static_cast<double>(s[x]) / d;
    return out;
}

// ---- variant helpers ----

int num_vars(const CostFunction& cost) {
    return std::visit([](const auto& c) { return c.n(); }, cost);
}

int arity(const CostFunction& cost) {
    if (const auto* p = std::get_if<PolyCost>(&cost)) return p->degree();
    return std::get<CspCost>(cost).max_arity();
}

double evaluate(const CostFunction& cost, Assignment x) {
    return std::visit([x](const auto& c) { return c.evaluate(x); }, cost);
}

double evaluate(const CostFunction& cost, std::span<const int> z) {
    return std::visit([z](const auto& c) { return c.evaluate(z); }, cost);
}

std::vector<double> evaluate_all(const CostFunction& cost, int cap) {
    check_cap(num_vars(cost), cap);
    return std::visit([](const auto& c) { return c.evaluate_all(); }, cost);
}

// ---- spectrum tables ----

std::vector<Assignment> optimal_assignments(std::span<const double> values, double e_star) {
    const double cut = e_star + kOptimumRelTol * std::max(1.0, std::abs(e_star));
    std::vector<Assignment> opt;
    for (std::size_t x = 0; x < values.size(); ++x)
        if (values[x] <= cut) opt.push_back(x);
    return opt;
}

SpectrumTable spectrum_from_values(int n, std::span<const double> values) {
    SpectrumTable t;
    t.n = n;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double scale = 0.0;
    if (!sorted.empty()) scale = std::max(std::abs(sorted.front()), std::abs(sorted.back()));
    const double merge = 1e-12 * std::max(1.0, scale);
    for (double e : sorted) {
        if (!t.levels.empty() && e - t.levels.back().energy <= merge)
            ++t.levels.back().multiplicity;
        else
            t.levels.push_back({e, 1});
    }
    t.e_star = sorted.empty() ? 0.0 : sorted.front();
    t.optimal = optimal_assignments(values, t.e_star);
    return t;
}

SpectrumTable spectrum_from_scaled(int n, std::span<const std::int64_t> scaled, std::int64_t den) {
    SpectrumTable t;
    t.n = n;
    t.den = den;
    std::vector<std::int64_t> sorted(scaled.begin(), scaled.end());
    std::sort(sorted.begin(), sorted.end());
    for (auto e : sorted) {
        if (!t.scaled_levels.empty() && t.scaled_levels.back() == e) {
            ++t.levels.back().multiplicity;
        } else {
            t.scaled_levels.push_back(e);
            t.levels.push_back({static_cast<double>(e) / static_cast<double>(den), 1});
        }
    }
    t.e_star = t.levels.front().energy;
    for (std::size_t x = 0; x < scaled.size(); ++x)
        if (scaled[x] == sorted.front()) t.optimal.push_back(x);
    return t;
}

SpectrumTable enumerate_spectrum(const CostFunction& cost, int cap) {
    const int n = num_vars(cost);
    check_cap(n, cap);
    if (const auto* csp = std::get_if<CspCost>(&cost)) {
        const auto s = csp->evaluate_all_scaled();
        return spectrum_from_scaled(n, s, csp->denominator());
    }
    const auto v = std::get<PolyCost>(cost).evaluate_all();
    return spectrum_from_values(n, v);
}

std::uint64_t cumulative_states(const SpectrumTable& table, double e) {
    std::uint64_t c = 0;
    for (const auto& l : table.levels) {
        if (l.energy > e) break;
        c += l.multiplicity;
    }
    return c;
}

std::uint64_t cumulative_states(const SpectrumTable& table, const Rational& e) {
    if (table.den == 0) return cumulative_states(table, e.to_double());
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < table.levels.size(); ++i) {
        // scaled/den <= num/eden  <=>  scaled*eden <= num*den
        const __int128 lhs = static_cast<__int128>(table.scaled_levels[i]) * e.den;
        const __int128 rhs = static_cast<__int128>(e.num) * table.den;
        if (lhs > rhs) break;
        c += table.levels[i].multiplicity;
    }
    return c;
}

// ---- samplers ----

PolyCost sample_k_spin(int n, int k, std::uint64_t seed) {
    if (k < 1 || k > n) throw ParameterError("k-spin requires 1 <= k <= n");
    double kfact = 1.0;
    for (int i = 2; i <= k; ++i) kfact *= i;
    const double scale = std::sqrt(kfact / std::pow(static_cast<double>(n), k - 1));
    CounterRng rng(seed);
    std::vector<Term> terms;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
        terms.push_back({idx, scale * rng.normal()});
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return PolyCost(n, std::move(terms));
}

namespace {

std::vector<int> choose_vars(CounterRng& rng, int n, int k) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int j = 0; j < k; ++j) {
        const auto r = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - j)));
        std::swap(pool[j], pool[r]);
    }
    std::vector<int> vars(pool.begin(), pool.begin() + k);
    std::sort(vars.begin(), vars.end());
    return vars;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

PolyCost sample_e_k_lin2(int n, int k, int m, std::uint64_t seed) {
    if (k < 1 || k > n) throw ParameterError("MAX-Ek-LIN2 requires 1 <= k <= n");
    if (m < 1 || m > binomial(n, k)) throw ParameterError("equation count must be in [1, C(n,k)]");
    CounterRng rng(seed);
    std::set<std::vector<int>> seen;
    std::vector<Term> terms;
    while (static_cast<int>(terms.size()) < m) {
        auto vars = choose_vars(rng, n, k);
        const double sign = (rng() & 1U) ? 1.0 : -1.0;
        if (seen.insert(vars).second) terms.push_back({std::move(vars), sign});
    }
    return PolyCost(n, std::move(terms));
}

PolyCost sample_qubo(int n, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<Term> terms;
    for (int i = 0; i < n; ++i) terms.push_back({{i}, rng.normal()});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) terms.push_back({{i, j}, rng.normal()});
    return PolyCost(n, std::move(terms));
}

CspCost sample_random_kcsp(int n, int k, int m, int s, std::uint64_t seed) {
    if (k < 1 || k > n || k > 6) throw ParameterError("k-CSP requires 1 <= k <= min(n, 6)");
    const int patterns = 1 << k;
    if (s < 1 || s > patterns - 1) throw ParameterError("s must be in [1, 2^k - 1]");
    if (m < 1) throw MalformedInstance("degenerate instance: no clauses, H is identically zero");
    CounterRng rng(seed);
    std::vector<Clause> clauses;
    clauses.reserve(m);
    for (int t = 0; t < m; ++t) {
        Clause c;
        c.vars = choose_vars(rng, n, k);
        std::vector<std::uint32_t> pool(patterns);
        std::iota(pool.begin(), pool.end(), 0U);
        for (int j = 0; j < s; ++j) {
            const auto r = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(patterns - j)));
            std::swap(pool[j], pool[r]);
        }
        c.satisfying.assign(pool.begin(), pool.begin() + s);
        clauses.push_back(std::move(c));
    }
    return CspCost(n, std::move(clauses));
}

CspCost sample_random_kcnf(int n, int k, int m, std::uint64_t seed) {
    return sample_random_kcsp(n, k, m, (1 << k) - 1, seed);
}

PolyCost qubo_to_e2lin2(const PolyCost& cost) {
    std::vector<Term> out;
    out.reserve(cost.terms().size());
    for (const auto& t : cost.terms()) {
        if (t.vars.size() == 1) {
            out.push_back({{0, t.vars[0] + 1}, t.coeff});
        } else if (t.vars.size() == 2) {
            out.push_back({{t.vars[0] + 1, t.vars[1] + 1}, t.coeff});
        } else {
            throw UnsupportedReduction("QUBO reduction requires term degrees in {1, 2}");
        }
    }
    return PolyCost(cost.n() + 1, std::move(out));
}

// ---- depolarizing checks ----

DepolarizingCheck check_depolarizing(int n, std::span<const double> values, double alpha,
                                     double tol) {
    DepolarizingCheck r;
    const std::size_t size = values.size();
    for (std::size_t x = 0; x < size; ++x) {
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += values[x ^ (std::size_t{1} << i)];
        mean /= n;
        r.max_violation = std::max(r.max_violation, std::abs(mean - (1.0 - alpha) * values[x]));
    }
    r.holds = r.max_violation <= tol;
    return r;
}

DepolarizingCheck check_depolarizing(const CostFunction& cost, double alpha, double tol) {
    const auto v = evaluate_all(cost);
    return check_depolarizing(num_vars(cost), v, alpha, tol);
}

SubdepolarizingCheck check_subdepolarizing(const CostFunction& cost, double eta, double alpha,
                                           int trials, std::uint64_t seed, int max_factors,
                                           double tol) {
    if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0,1)");
    const int n = num_vars(cost);
    const auto values = evaluate_all(cost);
    const double e_star = *std::min_element(values.begin(), values.end());
    if (!(e_star < 0.0)) throw MalformedInstance("degenerate instance: E* must be negative");
    const std::size_t size = values.size();
    std::vector<double> ratio(size);
    for (std::size_t x = 0; x < size; ++x) ratio[x] = values[x] / e_star;
    auto f = [eta](double x) { return std::max(0.0, (x - 1.0 + eta) / eta); };

    CounterRng rng(seed);
    SubdepolarizingCheck r;
    r.min_slack = std::numeric_limits<double>::infinity();
    std::vector<double> prod(size);
    for (int trial = 0; trial < trials; ++trial) {
        const int count = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_factors) + 1));
        std::vector<double> c(count);
        for (auto& ct : c) {
            const double u = rng.uniform();
            switch (rng.below(3)) {
                case 0: ct = u; break;
                case 1: ct = u * u * u * u; break;
                default: ct = 1.0 - u * u * u * u; break;
            }
            ct = std::clamp(ct, 1e-15, 1.0 - 1e-15);
        }
        for (std::size_t x = 0; x < size; ++x) {
            double p = 1.0;
            for (double ct : c) p *= f(ct * ratio[x]);
            prod[x] = p;
        }
        for (std::size_t x = 0; x < size; ++x) {
            double lhs = 0.0;
            for (int i = 0; i < n; ++i) lhs += prod[x ^ (std::size_t{1} << i)];
            lhs /= n;
            double rhs = 1.0;
            for (double ct : c) rhs *= f(ct * (1.0 - alpha) * ratio[x]);
            r.min_slack = std::min(r.min_slack, lhs - rhs);
        }
        ++r.trials;
    }
    r.holds = r.min_slack >= -tol;
    return r;
}

// ---- JSON ----

namespace {

std::string hex_bits(double v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "0x%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
    return buf;
}

double parse_coeff(const nlohmann::json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        std::size_t used = 0;
        const auto bits = std::stoull(s, &used, 16);
        if (used != s.size()) throw MalformedInstance("bad hex coefficient: " + s);
        return std::bit_cast<double>(static_cast<std::uint64_t>(bits));
    }
    if (j.is_number()) return j.get<double>();
    throw MalformedInstance("coefficient must be a hex string or a number");
}

}  // namespace

void to_json(nlohmann::json& j, const Instance& inst) {
    j = nlohmann::json::object();
    j["n"] = num_vars(inst.cost);
    j["k"] = inst.k;
    j["seed"] = inst.seed;
    j["ensemble"] = inst.ensemble;
    if (const auto* p = std::get_if<PolyCost>(&inst.cost)) {
        j["kind"] = "poly";
        auto terms = nlohmann::json::array();
        for (const auto& t : p->terms())
            terms.push_back({{"vars", t.vars}, {"coeff", hex_bits(t.coeff)}, {"value", t.coeff}});
        j["terms"] = std::move(terms);
    } else {
        const auto& c = std::get<CspCost>(inst.cost);
        j["kind"] = "csp";
        auto clauses = nlohmann::json::array();
        for (std::size_t t = 0; t < c.num_clauses(); ++t) {
            const auto v = c.unsatisfied_value(t);
            clauses.push_back({{"vars", c.clauses()[t].vars},
                               {"satisfying", c.clauses()[t].satisfying},
                               {"unsat_value", {{"num", v.num}, {"den", v.den}}}});
        }
        j["clauses"] = std::move(clauses);
    }
}

Instance instance_from_json(const nlohmann::json& j) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        const int n = j.at("n").get<int>();
        Instance inst{PolyCost(1, {{{0}, 1.0}}), j.value("k", 0), j.value("seed", std::uint64_t{0}),
                      j.value("ensemble", std::string{})};
        if (kind == "poly") {
            std::vector<Term> terms;
            for (const auto& t : j.at("terms"))
                terms.push_back({t.at("vars").get<std::vector<int>>(), parse_coeff(t.at("coeff"))});
            inst.cost = PolyCost(n, std::move(terms));
        } else if (kind == "csp") {
            std::vector<Clause> clauses;
            for (const auto& c : j.at("clauses"))
                clauses.push_back({c.at("vars").get<std::vector<int>>(),
                                   c.at("satisfying").get<std::vector<std::uint32_t>>()});
            CspCost csp(n, std::move(clauses));
            for (std::size_t t = 0; t < csp.num_clauses(); ++t) {
                const auto& c = j.at("clauses")[t];
                if (c.contains("unsat_value")) {
                    const auto v = Rational::make(c["unsat_value"].at("num").get<std::int64_t>(),
                                                  c["unsat_value"].at("den").get<std::int64_t>());
                    if (!(v == csp.unsatisfied_value(t)))
                        throw MalformedInstance("clause unsat_value disagrees with its satisfying set");
                }
            }
            inst.cost = std::move(csp);
        } else {
            throw MalformedInstance("unknown instance kind: " + kind);
        }
        if (inst.k == 0) inst.k = arity(inst.cost);
        return inst;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInstance(std::string("instance JSON: ") + e.what());
    }
}

}  // namespace shortpath
