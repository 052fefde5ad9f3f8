#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "flowbb/actors.hpp"
#include "flowbb/flowshop.hpp"

namespace flowbb {

// Master/worker layout: one entry per master giving its worker count.
struct Topology {
    std::vector<std::size_t> workers_per_master = {2, 2};
    Time sync_interval = 50;  // virtual units in simulation, ms with threads

    std::size_t n_masters() const { return workers_per_master.size(); }
    std::size_t n_workers() const;
};

// "M:w1,w2,..." — master count, then per-master worker counts (cycled when
// fewer counts than masters are given, so "3:4" means three masters of 4).
Topology parse_topology(const std::string& text);

// Relative worker speeds. Factor f means a worker finishes the same search
// in 1/f of the time; factors cycle over workers in id order.
struct HeterogeneityModel {
    std::vector<double> factors = {1.0};

    double factor_for(std::size_t worker_index) const {
        return factors[worker_index % factors.size()];
    }
    static HeterogeneityModel homogeneous() { return {}; }
    static HeterogeneityModel mixed(std::vector<double> f);
};

// "homogeneous" or "mixed:f1,f2,...".
HeterogeneityModel parse_het(const std::string& text);

enum class RunMode { Sim, Threads };
RunMode parse_mode(const std::string& text);  // sim | threads

struct RunConfig {
    Strategy strategy = Strategy::Acwn;
    Transfer transfer = Transfer::MultiInOne;
    PfsWeight pfs_weight = PfsWeight::Literal;
    BoundKind bound = BoundKind::Machine;
    int k_split = 1;           // initial decomposition depth (floor index)
    Topology topology;
    HeterogeneityModel het;
    Time link_latency = 1;     // per-message delay in the simulation
    std::uint64_t node_budget = 0;  // global cap on expanded nodes; 0 = none
    std::uint64_t seed = 0;
    RunMode mode = RunMode::Sim;
    bool record_trace = false;
    Time initial_best = kNoIncumbent;
    std::size_t max_particles = 1u << 20;
};

struct RunMetrics {
    Time completion_time = 0;  // when the last subproblem finished
    Time drain_time = 0;       // when the runtime went fully quiet
    bool complete = true;      // false if the node budget truncated the search
    Time makespan = kNoIncumbent;
    Permutation best;          // empty when nothing was proven (truncated runs)
    SearchStats search;        // summed over all workers
    std::uint64_t particles_total = 0;
    std::uint64_t particles_done = 0;
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;
    std::array<std::uint64_t, kMsgKinds> messages_by_kind{};
    std::array<std::uint64_t, kMsgKinds> bytes_by_kind{};
    std::vector<TraceEvent> trace;  // filled when RunConfig::record_trace
    std::vector<MasterStats> per_master;
};

// One full run of the hierarchy on one instance. The simulated mode is
// bit-for-bit deterministic for a given config; the threaded mode runs the
// same protocol on real threads and reports wall-clock milliseconds.
RunMetrics run_experiment(const Instance& inst, const RunConfig& cfg);

// The two engines behind run_experiment, callable directly.
RunMetrics run_simulated(const Instance& inst, const RunConfig& cfg);
RunMetrics run_threaded(const Instance& inst, const RunConfig& cfg);

}  // namespace flowbb
