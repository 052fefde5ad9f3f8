#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>

#include "flowbb/common.hpp"
#include "flowbb/flowshop.hpp"
#include "flowbb/tree.hpp"

namespace flowbb {

// Monotone shared incumbent: `tighten` only ever lowers the value. Safe to
// share between solver threads; the permutation is kept under a mutex and
// only replaced together with a strictly better value.
class IncumbentCell {
public:
    explicit IncumbentCell(Time initial = kNoIncumbent) : value_(initial) {}

    Time value() const { return value_.load(std::memory_order_acquire); }

    // Returns true if `value` strictly improved the cell.
    bool tighten(Time value, const Permutation& perm);

    Permutation best_permutation() const;

private:
    std::atomic<Time> value_;
    mutable std::mutex mu_;
    Time perm_value_ = kNoIncumbent;  // value perm_ actually achieves
    Permutation perm_;
};

struct SearchStats {
    std::uint64_t nodes_expanded = 0;   // internal nodes whose children were generated
    std::uint64_t nodes_pruned = 0;     // subtrees discarded by the bound test
    std::uint64_t leaves_evaluated = 0; // complete schedules costed
    std::uint64_t improvements = 0;     // strict incumbent updates

    SearchStats& operator+=(const SearchStats& o);
};

// Returned by the periodic poll hook: a tighter incumbent learned from
// outside (e.g. a message), and/or an order to stop early.
struct PollAction {
    std::optional<Time> better;
    bool stop = false;
};

struct SolveOptions {
    Time initial_incumbent = kNoIncumbent;
    std::uint64_t node_budget = 0;  // 0 = unbounded
    BoundKind bound = BoundKind::Machine;
    IncumbentCell* shared = nullptr;  // optional cross-thread incumbent
    std::uint64_t poll_interval = 4096;
    std::function<PollAction()> poll;
    std::function<void(Time, const Permutation&)> on_improve;
};

struct SolveResult {
    Permutation best;  // empty if nothing beat initial_incumbent
    Time value = kNoIncumbent;
    SearchStats stats;
    bool complete = true;  // false if the budget or a poll stop cut the search short
};

// Depth-first branch and bound over one subtree. Children are visited in
// ascending (bound, job) order; a child is pruned when its bound is >= the
// current incumbent, which preserves the optimal value while skipping ties.
SolveResult solve_subtree(const Instance& inst, const Subproblem& root,
                          const SolveOptions& options = {});

// The whole tree in one process, same search core.
SolveResult solve_sequential(const Instance& inst, const SolveOptions& options = {});

// Exhaustive reference: tries all n! schedules in lexicographic order and
// keeps the first optimum. Guarded to small n; used as a test oracle.
SolveResult brute_force(const Instance& inst);

}  // namespace flowbb
