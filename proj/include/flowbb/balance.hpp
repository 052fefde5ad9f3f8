#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flowbb/common.hpp"

namespace flowbb {

// How the supervisor places work across masters.
enum class Strategy {
    Sld,   // one-time proportional split, never revised
    Rand,  // each reallocation goes to a uniformly random master
    Acwn,  // each reallocation goes to the master with the least pending work
    Pfs,   // periodic proportional re-planning from observed execution times
};

// How many subproblems one reallocation message may carry.
enum class Transfer {
    OneInOne,    // exactly one id per message
    MultiInOne,  // a count-tagged batch per message
};

// Which weight the proportional plan uses. `Literal` multiplies the mean
// per-subproblem execution time by the worker count; `Rate` divides the
// worker count by that mean, i.e. weights by throughput.
enum class PfsWeight { Literal, Rate };

Strategy parse_strategy(const std::string& token);   // sld | rand | acwn | pfs
Transfer parse_transfer(const std::string& token);   // 1in1 | min1
PfsWeight parse_pfs_weight(const std::string& token);  // literal | rate
std::string to_string(Strategy s);
std::string to_string(Transfer t);
std::string to_string(PfsWeight w);

// What the supervisor knows about one master when planning.
struct MasterStats {
    int master_id = 0;
    std::size_t n_workers = 0;
    std::uint64_t pending = 0;    // subproblems queued, not yet handed to a worker
    std::uint64_t completed = 0;  // subproblems fully solved so far
    Time total_exec_time = 0;     // summed execution time of the completed ones

    Time avg_exec_time() const {
        return completed ? total_exec_time / static_cast<Time>(completed) : 0;
    }
};

// Splits `total` into integer shares proportional to `weights` using the
// largest-remainder rule; remainder ties go to the lower index, and an
// all-zero weight vector falls back to an equal split. Scaling every weight
// by the same power of two leaves the result unchanged.
std::vector<std::uint64_t> proportional_counts(std::uint64_t total,
                                               const std::vector<double>& weights);

// The proportional plan: how many of `total` subproblems each master should
// hold, given current stats. While any master has no completions yet the
// weights fall back to plain worker counts.
std::vector<std::uint64_t> pfs_allocate(std::uint64_t total,
                                        const std::vector<MasterStats>& stats,
                                        PfsWeight weight = PfsWeight::Literal);

// Recipient choice for the two event-driven strategies.
int acwn_select(const std::vector<MasterStats>& stats);  // least pending, ties lower id
int rand_select(std::mt19937_64& rng, int n_masters);    // uniform, rejection sampled

// One-time split of the initial frontier into contiguous runs, sized
// proportionally to per-master worker counts.
std::vector<std::vector<u128>> sld_partition(const std::vector<u128>& ids,
                                             const std::vector<std::size_t>& worker_counts);

}  // namespace flowbb
