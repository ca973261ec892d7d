#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "shortpath/bounds.hpp"
#include "shortpath/conditions.hpp"
#include "shortpath/cost.hpp"
#include "shortpath/spectral.hpp"

namespace shortpath {

struct ExperimentConfig {
    std::string kind = "spectrum-scan";
    std::string ensemble = "k_spin";  ///< k_spin | e_k_lin2 | qubo | k_csp | k_cnf
    int n = 10;
    int n_min = 0;                    ///< n_min..n_max overrides n when both are set
    int n_max = 0;
    int k = 3;
    int m = 0;                        ///< 0 picks the ensemble default
    int s = 0;                        ///< satisfying patterns per clause (k_csp); 0: 2^{k-1}
    double eta = 0.5;
    double b = 0.7;
    std::vector<double> b_grid;       ///< empty: 0 to 1 step 0.01
    int instances = 1;
    std::uint64_t master_seed = 1;
    double tol = 0.0;                 ///< 0 picks the solver default
    std::string method = "auto";      ///< auto | dense | lanczos
    unsigned threads = 1;
    bool short_path = false;          ///< conditions: also compute the deflated energy
    double mu = 2.0;                  ///< bounds: slack exponent
    std::string output;               ///< CSV file name; empty: <kind>.csv
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

std::vector<int> n_values(const ExperimentConfig& c);
std::vector<double> b_values(const ExperimentConfig& c);
SolveOptions solve_options(const ExperimentConfig& c, std::uint64_t seed);

/// Seed of instance `index` at size n.
std::uint64_t instance_seed(std::uint64_t master_seed, int n, int index);
int default_m(const std::string& ensemble, int n, int k);
CostFunction make_instance(const ExperimentConfig& c, int n, int index);

/// Float formatting used in every CSV: 17 significant digits.
std::string format_double(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string str() const;
};

void write_text(const std::string& path, const std::string& text);

CsvTable spectrum_scan(const ExperimentConfig& c);
CsvTable overlap_scan(const ExperimentConfig& c);

struct FitResult {
    double slope = 0.0;        ///< base-2 exponent
    double intercept = 0.0;    ///< log2 prefactor
    double prefactor = 1.0;
    double residual = 0.0;     ///< residual sum of squares in log2 units
    double slope_se = 0.0;
    double ci_low = 0.0;       ///< 95% interval
    double ci_high = 0.0;
    int points = 0;
};

/// OLS of log2(value) on n with a t-distribution interval for the slope.
FitResult fit_exponential(const std::vector<std::pair<double, double>>& points, double level = 0.95);

struct ScalingRecord {
    int n = 0;
    int index = 0;
    std::uint64_t seed = 0;
    SpectralSummary summary;
    ConditionVerdict large_excited_energy;
    ConditionVerdict small_ground_energy_shift;
    double inverse_overlap = 0.0;
    bool excluded = false;
    std::string status = "ok";
};

struct ScalingResult {
    std::vector<ScalingRecord> records;
    std::vector<std::pair<double, double>> medians;  ///< (n, median inverse overlap)
    FitResult fit;
    int excluded = 0;
    CsvTable table;
    CsvTable median_table;
};

/// Inverse overlap |<z*|psi_b>|^{-1} per instance, per-n medians and the fit.
/// Instances failing the large excited-energy condition are excluded.
ScalingResult scaling_study(const ExperimentConfig& c);

struct ConditionsRecord {
    int n = 0;
    int index = 0;
    ConditionReport report;
    std::string status = "ok";
};

std::vector<ConditionsRecord> conditions_sweep(const ExperimentConfig& c);
CsvTable conditions_table(const ExperimentConfig& c, const std::vector<ConditionsRecord>& recs);

struct BoundsRecord {
    int n = 0;
    int index = 0;
    double b = 0.0;
    double alpha = 0.0;
    ConditionReport conditions;
    bool conditions_hold = false;
    bool lemma_checked = false;
    LemmaOverlapCheck lemma;
    bool agsp_applicable = false;
    std::string agsp_reason;
    AgspCheck agsp;
    RuntimeEstimate runtime;
};

/// alpha for which the ensemble's costs are alpha-(sub)depolarizing.
double ensemble_alpha(const ExperimentConfig& c, const CostFunction& cost, double e_star, int n);

/// Lemma checks at b for every instance; b_values(c) are tried in order and the
/// first value at which both conditions hold is used.
std::vector<BoundsRecord> bounds_suite(const ExperimentConfig& c);
CsvTable bounds_table(const ExperimentConfig& c, const std::vector<BoundsRecord>& recs);

/// Quantum column of the runtime summary table.
CsvTable speedup_table(const ExperimentConfig& c);

/// Tail exponents, b_max and speedup constants at the config's k and eta.
CsvTable params_table(const ExperimentConfig& c);

/// Algorithm runs for every instance; JSON diagnostics.
nlohmann::json run_diagnostics(const ExperimentConfig& c, bool unknown_estar);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

/// Runs the configured experiment, writing CSV (or JSON for run) plus
/// manifest.json into out_dir. Returns the data file path.
std::string run_experiment(const ExperimentConfig& c, const std::string& out_dir);

}  // namespace shortpath
