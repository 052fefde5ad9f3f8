#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flowbb/experiment.hpp"

namespace {

using namespace flowbb;

// One bag of raw flag values per subcommand; only flags the user actually
// passed override the config file, so every option is kept as text and
// applied by hand after parsing.
struct CommonFlags {
    std::string config;
    std::vector<std::string> instances;
    std::string strategy, transfer, topology, het, mode, pfs_weight, bound;
    int k_split = 0, replicates = 0, jobs = 0;
    std::uint64_t budget = 0, seed = 0;
    long long latency = 0, sync_interval = 0;
    std::string out, trace;
    int random_instances = 0, random_n = 0, random_m = 0;
    double random_mean = 0, random_sd = 0;
};

void add_common_options(CLI::App* app, CommonFlags& f) {
    app->add_option("--config", f.config, "flat key=value settings file");
    app->add_option("--instance", f.instances, "benchmark file (repeatable)");
    app->add_option("--strategy", f.strategy, "sld|rand|acwn|pfs (comma list for compare)");
    app->add_option("--transfer", f.transfer, "1in1|min1 (comma list for compare)");
    app->add_option("--k-split", f.k_split, "initial decomposition depth");
    app->add_option("--topology", f.topology, "masters and workers, e.g. 2:4,4");
    app->add_option("--het", f.het, "homogeneous or mixed:f1,f2,...");
    app->add_option("--mode", f.mode, "sim or threads");
    app->add_option("--budget", f.budget, "global node budget, 0 = none");
    app->add_option("--seed", f.seed, "root seed for the whole experiment");
    app->add_option("--latency", f.latency, "simulated per-message delay");
    app->add_option("--sync-interval", f.sync_interval, "supervisor tick period");
    app->add_option("--pfs-weight", f.pfs_weight, "literal or rate");
    app->add_option("--bound", f.bound, "machine or two-machine");
    app->add_option("--replicates", f.replicates, "paired repetitions per cell");
    app->add_option("--jobs", f.jobs, "parallel runs for compare (sim only)");
    app->add_option("--out", f.out, "CSV output path");
    app->add_option("--trace", f.trace, "message trace output path (solve only)");
    app->add_option("--random-instances", f.random_instances,
                    "number of generated instances to add");
    app->add_option("--random-n", f.random_n, "jobs per generated instance");
    app->add_option("--random-m", f.random_m, "machines per generated instance");
    app->add_option("--random-mean", f.random_mean, "mean processing time");
    app->add_option("--random-sd", f.random_sd, "processing time spread");
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

ExperimentConfig build_config(const CLI::App* app, const CommonFlags& f) {
    ExperimentConfig cfg;
    if (app->count("--config")) apply_config_file(cfg, f.config);
    auto given = [&](const char* name) { return app->count(name) > 0; };

    if (given("--instance")) cfg.instance_files = f.instances;
    if (given("--strategy")) {
        cfg.strategies.clear();
        for (const std::string& s : split_commas(f.strategy))
            cfg.strategies.push_back(parse_strategy(s));
    }
    if (given("--transfer")) {
        cfg.transfers.clear();
        for (const std::string& t : split_commas(f.transfer))
            cfg.transfers.push_back(parse_transfer(t));
    }
    if (given("--k-split")) cfg.base.k_split = f.k_split;
    if (given("--topology")) cfg.base.topology = parse_topology(f.topology);
    if (given("--het")) cfg.base.het = parse_het(f.het);
    if (given("--mode")) cfg.base.mode = parse_mode(f.mode);
    if (given("--budget")) cfg.base.node_budget = f.budget;
    if (given("--seed")) cfg.seed = f.seed;
    if (given("--latency")) cfg.base.link_latency = f.latency;
    if (given("--sync-interval")) cfg.base.topology.sync_interval = f.sync_interval;
    if (given("--pfs-weight")) cfg.base.pfs_weight = parse_pfs_weight(f.pfs_weight);
    if (given("--bound")) cfg.base.bound = parse_bound_kind(f.bound);
    if (given("--replicates")) cfg.replicates = f.replicates;
    if (given("--jobs")) cfg.jobs = f.jobs;
    if (given("--out")) cfg.out_path = f.out;
    if (given("--trace")) cfg.trace_path = f.trace;
    if (given("--random-instances")) cfg.random_instances = f.random_instances;
    if (given("--random-n")) cfg.random_n = f.random_n;
    if (given("--random-m")) cfg.random_m = f.random_m;
    if (given("--random-mean")) cfg.random_mean = f.random_mean;
    if (given("--random-sd")) cfg.random_sd = f.random_sd;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical branch-and-bound flowshop solver"};
    app.require_subcommand(1);

    CommonFlags solve_flags, compare_flags;
    CLI::App* solve = app.add_subcommand("solve", "run one instance once");
    add_common_options(solve, solve_flags);
    CLI::App* compare =
        app.add_subcommand("compare", "run every strategy/transfer cell and tabulate");
    add_common_options(compare, compare_flags);

    GenSpec gen_spec;
    CLI::App* gen = app.add_subcommand("gen", "write generated benchmark instances");
    gen->add_option("--n", gen_spec.n, "jobs per instance");
    gen->add_option("--m", gen_spec.m, "machines per instance");
    gen->add_option("--count", gen_spec.count, "instances to generate");
    gen->add_option("--mean", gen_spec.mean, "mean processing time");
    gen->add_option("--sd", gen_spec.sd, "processing time spread");
    gen->add_option("--seed", gen_spec.seed, "generator seed");
    gen->add_option("--out", gen_spec.out_path, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;  // help/version exit clean, bad flags are input errors
    }

    try {
        if (solve->parsed()) return cmd_solve(build_config(solve, solve_flags), std::cout);
        if (compare->parsed())
            return cmd_compare(build_config(compare, compare_flags), std::cout);
        if (gen->parsed()) return cmd_gen(gen_spec, std::cout);
    } catch (const flowbb::ProtocolViolation& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const flowbb::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const flowbb::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 4;  // unreachable: a subcommand is required
}
