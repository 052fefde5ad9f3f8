#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flowbb/runtime.hpp"
#include "flowbb/taillard.hpp"

namespace flowbb {

// One CSV row of a comparison run.
struct RunRecord {
    std::string instance;
    Strategy strategy = Strategy::Sld;
    Transfer transfer = Transfer::OneInOne;
    std::uint64_t seed = 0;
    Time time = 0;
    Time makespan = kNoIncumbent;  // kNoIncumbent prints as an empty cell
    bool optimal = false;
    std::uint64_t nodes = 0;
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;
    std::string status;  // "optimal" or "truncated"
};

inline constexpr const char* kCsvHeader =
    "instance,strategy,transfer,seed,time,makespan,optimal,nodes,messages,bytes,status";

std::string csv_row(const RunRecord& r);
void write_csv(std::ostream& out, const std::vector<RunRecord>& records);

// Everything a solve or compare invocation needs. Filled from defaults,
// then a config file, then command-line flags (strongest last).
struct ExperimentConfig {
    std::vector<std::string> instance_files;
    int random_instances = 0;  // generated benchmark set, in addition to files
    int random_n = 8;
    int random_m = 4;
    double random_mean = 50.0;
    double random_sd = 25.0;
    std::vector<Strategy> strategies = {Strategy::Sld, Strategy::Rand, Strategy::Acwn,
                                        Strategy::Pfs};
    std::vector<Transfer> transfers = {Transfer::OneInOne, Transfer::MultiInOne};
    int replicates = 1;
    std::uint64_t seed = 1;
    RunConfig base;
    std::string out_path;    // CSV destination; empty = no CSV
    std::string trace_path;  // message trace (solve only); empty = none
    int jobs = 1;            // parallel cells for compare (simulation mode only)
};

// Flat "key = value" file, '#' comments, repeatable keys for the list-valued
// settings. Throws ParseError with the offending line number.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

// The instance roster: every instance in every listed file (files may hold
// several), then the generated random set. Instance and run seeds derive
// from cfg.seed, so the roster is reproducible.
std::vector<Instance> collect_instances(const ExperimentConfig& cfg);

// The run seed for (instance, replicate): shared by every strategy/transfer
// cell so comparisons are paired.
std::uint64_t run_seed_for(std::uint64_t root, std::size_t instance_idx, int replicate);

// One run for every instance x strategy x transfer x replicate, in that
// (row-major) order. Writes the CSV when cfg.out_path is set, prints a
// summary table to `summary`. Returns 0, or 2 if any run was truncated.
int cmd_compare(const ExperimentConfig& cfg, std::ostream& summary);

// A single run: first instance of the roster, first strategy and transfer.
// Prints a human-readable report; same CSV/exit-code conventions.
int cmd_solve(const ExperimentConfig& cfg, std::ostream& out);

// Writes `count` generated instances as one concatenated benchmark file.
struct GenSpec {
    int n = 10;
    int m = 5;
    int count = 1;
    double mean = 50.0;
    double sd = 25.0;
    std::uint64_t seed = 1;
    std::string out_path;
};
int cmd_gen(const GenSpec& req, std::ostream& diag);

}  // namespace flowbb
