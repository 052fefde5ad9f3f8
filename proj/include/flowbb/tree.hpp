#pragma once

#include <span>
#include <vector>

#include "flowbb/common.hpp"
#include "flowbb/flowshop.hpp"

namespace flowbb {

// The search tree over permutation prefixes is addressed by integer IDs.
// Floor k holds every prefix that fixes k+1 jobs, in lexicographic order;
// floors are laid out back to back, so
//
//   id(k, m) = sum_{i=1..k} n!/(n-i)!  +  m
//
// where m is the prefix's lexicographic rank within its floor. IDs are
// therefore ordered by (floor, rank), and a whole floor is one contiguous
// range. The full space for n jobs is sum_{i=1..n} n!/(n-i)! ids, which
// fits in 128 bits up to n = 33.
inline constexpr int kMaxJobs = 33;

u128 falling_factorial(int n, int terms);          // n * (n-1) * ... , `terms` factors
u128 floor_size(int n, int k);                     // prefixes on floor k: n!/(n-k-1)!
u128 floor_offset(int n, int k);                   // first id on floor k
u128 leaves_below(int n, int k);                   // full schedules under one floor-k node
u128 total_ids(int n);                             // ids across all floors

u128 encode_id(int n, std::span<const int> prefix);
int floor_of(int n, u128 id);                      // throws CapacityError if id out of range
Permutation decode_prefix(int n, u128 id);

// A materialized tree node: the fixed prefix, its completion front, and a
// lower bound on every schedule in its subtree.
struct Subproblem {
    u128 id = 0;
    u128 rank = 0;  // lexicographic rank within the floor
    Permutation prefix;
    CompletionFront front;
    Time bound = 0;
};

Subproblem materialize(const Instance& inst, u128 id, BoundKind kind = BoundKind::Machine);

// All one-job extensions of `node`, in ascending job order. Child ids are
// derived from the parent rank without re-encoding.
std::vector<Subproblem> children(const Instance& inst, const Subproblem& node,
                                 BoundKind kind = BoundKind::Machine);

// The initial decomposition: every id on floor k, lowest first. Guarded by
// `max_particles` because floor sizes grow factorially.
std::vector<u128> split_frontier(int n, int k, std::size_t max_particles = 1u << 20);

}  // namespace flowbb
