#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shortpath/error.hpp"
#include "shortpath/experiments.hpp"

using namespace shortpath;

namespace {

ExperimentConfig load_config(const std::string& path, const std::string& kind) {
    ExperimentConfig c;
    if (!path.empty()) {
        std::ifstream f(path);
        if (!f) throw ParameterError("cannot read config " + path);
        c = config_from_json(nlohmann::json::parse(f));
    }
    c.kind = kind;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for the short-path optimization algorithm"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";

    for (const char* kind : {"spectrum-scan", "overlap-scan", "scaling", "conditions", "bounds", "table", "params"}) {
        auto* sub = app.add_subcommand(kind, std::string("Run the ") + kind + " experiment");
        sub->add_option("--config", config_path, "Experiment config (JSON)");
        sub->add_option("--out", out_dir, "Output directory");
    }

    auto* run = app.add_subcommand("run", "Simulate the algorithm on sampled instances");
    ExperimentConfig rc;
    rc.kind = "run";
    bool unknown_estar = false;
    run->add_option("--config", config_path, "Experiment config (JSON); flags override it");
    run->add_option("--out", out_dir, "Output directory");
    auto* o_ens = run->add_option("--ensemble", rc.ensemble, "k_spin | e_k_lin2 | qubo | k_csp | k_cnf");
    auto* o_n = run->add_option("--n", rc.n, "Number of variables");
    auto* o_k = run->add_option("--k", rc.k, "Locality");
    auto* o_eta = run->add_option("--eta", rc.eta, "Flooding depth in (0,1)");
    auto* o_b = run->add_option("--b", rc.b, "Coupling strength");
    auto* o_seed = run->add_option("--seed", rc.master_seed, "Master seed");
    auto* o_inst = run->add_option("--instances", rc.instances, "Instances to run");
    run->add_flag("--unknown-estar", unknown_estar, "Estimate E* by the grid and binary search first");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string kind = sub->get_name();
        if (kind == "run") {
            ExperimentConfig c = load_config(config_path, "run");
            if (*o_ens) c.ensemble = rc.ensemble;
            if (*o_n) c.n = rc.n;
            if (*o_k) c.k = rc.k;
            if (*o_eta) c.eta = rc.eta;
            if (*o_b) c.b = rc.b;
            if (*o_seed) c.master_seed = rc.master_seed;
            if (*o_inst) c.instances = rc.instances;
            if (unknown_estar) {
                const auto j = run_diagnostics(c, true);
                std::cout << j.dump(2) << '\n';
                return 0;
            }
            std::cout << run_experiment(c, out_dir) << '\n';
            return 0;
        }
        if (kind != "table" && kind != "params" && config_path.empty()) {
            std::cerr << "--config is required for " << kind << '\n';
            return 2;
        }
        std::cout << run_experiment(load_config(config_path, kind), out_dir) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
