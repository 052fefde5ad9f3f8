#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowbb/common.hpp"

namespace flowbb {

// A permutation-flowshop instance: n jobs, m machines, and an n x m
// matrix of processing times indexed (job, machine). Every job visits
// machines 0..m-1 in order; all machines process jobs in one shared
// permutation.
struct Instance {
    int jobs = 0;
    int machines = 0;
    std::vector<Time> proc;  // row-major by job: proc[job * machines + machine]
    std::string name;

    // Optional header metadata carried by benchmark files.
    std::optional<long long> file_seed;
    std::optional<long long> upper_bound;
    std::optional<long long> lower_bound;

    Instance() = default;
    // Validates n >= 1, m >= 1, exactly n*m non-negative entries.
    Instance(int n, int m, std::vector<Time> times, std::string id = "");

    Time p(int job, int machine) const { return proc[static_cast<std::size_t>(job) * machines + machine]; }
};

// A (partial) job order. Complete when it contains each of 0..n-1
// exactly once; a prefix is the same representation with length <= n.
using Permutation = std::vector<int>;

// Per-machine completion times after scheduling some prefix; the last
// row of the standard completion-time recurrence.
using CompletionFront = std::vector<Time>;

bool is_complete_permutation(const Instance& inst, const Permutation& perm);

// Makespan of a complete permutation via
//   C(i,j) = max(C(i-1,j), C(i,j-1)) + p(perm[i], j),  C(0,.) = C(.,0) = 0.
// Throws std::invalid_argument on an incomplete or duplicate permutation.
Time makespan(const Instance& inst, const Permutation& perm);

CompletionFront empty_front(const Instance& inst);

// Schedules one more job after the prefix that produced `front`.
// Equivalent to recomputing the recurrence from scratch on prefix+job.
void extend_front_inplace(const Instance& inst, CompletionFront& front, int job);
CompletionFront extend_front(const Instance& inst, const CompletionFront& front, int job);

// Johnson's rule for m == 2, exact: jobs with p(j,0) < p(j,1) first in
// ascending p(j,0), the rest after in descending p(j,1), ties broken by
// lower job index. Throws std::invalid_argument when m != 2.
Permutation johnson_order(const Instance& inst);

enum class BoundKind {
    Machine,     // per-machine load bound (default)
    TwoMachine,  // machine bound strengthened by two-machine Johnson relaxations
};

BoundKind parse_bound_kind(const std::string& token);
std::string to_string(BoundKind kind);

// Admissible lower bound on the makespan of every completion of the
// prefix that produced `front`, given the set of unscheduled jobs.
// With no remaining jobs this is exactly front[m-1]; with one remaining
// job the machine bound is exact.
//
// Machine bound:
//   LB = max_j ( front[j] + sum_{r in remaining} p(r,j)
//                         + min_{r in remaining} tail(r,j) ),
//   tail(r,j) = sum_{k>j} p(r,k).
//
// TwoMachine additionally takes, for every machine pair a < b, the
// optimal two-machine schedule with transit lags sum_{a<k<b} p(r,k)
// (Johnson order on (p_a + lag, lag + p_b)) plus the smallest tail
// after b, and returns the max of all of these with the machine bound.
Time lower_bound(const Instance& inst, const CompletionFront& front,
                 std::span<const int> remaining, BoundKind kind = BoundKind::Machine);

// Instance with every p(j,k) drawn from normal(mean, stddev), rounded
// to nearest and clamped to >= 1. The sampler is a fixed Box-Muller
// over mt19937_64 so identical seeds give identical instances on every
// platform.
Instance generate_random(int n, int m, double mean, double stddev, std::uint64_t seed);

}  // namespace flowbb
