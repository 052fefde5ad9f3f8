#include "flowbb/solver.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace flowbb {

bool IncumbentCell::tighten(Time value, const Permutation& perm) {
    Time cur = value_.load(std::memory_order_relaxed);
    while (value < cur) {
        if (value_.compare_exchange_weak(cur, value, std::memory_order_acq_rel)) {
            std::lock_guard lock(mu_);
            if (value < perm_value_) {  // a racing thread may have stored better
                perm_value_ = value;
                perm_ = perm;
            }
            return true;
        }
    }
    return false;
}

Permutation IncumbentCell::best_permutation() const {
    std::lock_guard lock(mu_);
    return perm_;
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
    nodes_expanded += o.nodes_expanded;
    nodes_pruned += o.nodes_pruned;
    leaves_evaluated += o.leaves_evaluated;
    improvements += o.improvements;
    return *this;
}

namespace {

// One depth-first pass. The hot path recomputes nothing per child that the
// parent can stage: per-machine remaining load is maintained by +/- of the
// branching job, and the min-tail term uses the two smallest tails per
// machine so that removing any single job still resolves in O(1).
class Search {
public:
    Search(const Instance& inst, const SolveOptions& opt)
        : inst_(inst), opt_(opt), m_(inst.machines) {
        incumbent_ = opt.initial_incumbent;
        if (opt.shared) incumbent_ = std::min(incumbent_, opt.shared->value());
        tails_.resize(static_cast<std::size_t>(inst.jobs) * m_);
        for (int job = 0; job < inst_.jobs; ++job) {
            Time acc = 0;
            for (int j = m_ - 1; j >= 0; --j) {
                tails_[static_cast<std::size_t>(job) * m_ + j] = acc;  // strictly after j
                acc += inst.p(job, j);
            }
        }
    }

    SolveResult run(const Subproblem& root) {
        path_ = root.prefix;
        if (root.bound >= incumbent_) {
            ++stats_.nodes_pruned;
            return finish();
        }
        std::vector<char> used(inst_.jobs, 0);
        for (int j : root.prefix) used[j] = 1;
        std::vector<int> remaining;
        for (int j = 0; j < inst_.jobs; ++j)
            if (!used[j]) remaining.push_back(j);
        std::vector<Time> sums(m_, 0);
        for (int r : remaining)
            for (int j = 0; j < m_; ++j) sums[j] += inst_.p(r, j);
        CompletionFront front = root.front;
        if (remaining.empty()) {
            evaluate_leaf(front[m_ - 1]);
            return finish();
        }
        dfs(front, remaining, sums);
        return finish();
    }

private:
    struct Candidate {
        Time bound;
        int job;
        std::size_t slot;  // index within the remaining list
    };

    Time tail(int job, int machine) const {
        return tails_[static_cast<std::size_t>(job) * m_ + machine];
    }

    void evaluate_leaf(Time value) {
        ++stats_.leaves_evaluated;
        if (value >= incumbent_) return;
        incumbent_ = value;
        best_ = path_;
        ++stats_.improvements;
        if (opt_.shared) opt_.shared->tighten(value, best_);
        if (opt_.on_improve) opt_.on_improve(value, best_);
    }

    void checkpoint() {
        if (opt_.node_budget && stats_.nodes_expanded >= opt_.node_budget) {
            stopped_ = true;
            return;
        }
        const std::uint64_t interval = opt_.poll_interval ? opt_.poll_interval : 1;
        if (stats_.nodes_expanded % interval != 0) return;
        if (opt_.shared) incumbent_ = std::min(incumbent_, opt_.shared->value());
        if (opt_.poll) {
            PollAction act = opt_.poll();
            if (act.better && *act.better < incumbent_) incumbent_ = *act.better;
            if (act.stop) stopped_ = true;
        }
    }

    void dfs(CompletionFront& front, std::vector<int>& remaining, std::vector<Time>& sums) {
        ++stats_.nodes_expanded;
        checkpoint();
        if (stopped_) return;

        const std::size_t r_count = remaining.size();
        // Smallest and second-smallest tail per machine across `remaining`,
        // with multiplicity of the smallest, so one removal is resolvable.
        min1_.assign(m_, kNoIncumbent);
        min1n_.assign(m_, 0);
        min2_.assign(m_, kNoIncumbent);
        for (int r : remaining) {
            for (int j = 0; j < m_; ++j) {
                Time t = tail(r, j);
                if (t < min1_[j]) {
                    min2_[j] = min1_[j];
                    min1_[j] = t;
                    min1n_[j] = 1;
                } else if (t == min1_[j]) {
                    ++min1n_[j];
                } else if (t < min2_[j]) {
                    min2_[j] = t;
                }
            }
        }

        std::vector<Candidate> cands;
        cands.reserve(r_count);
        std::vector<CompletionFront> child_fronts(r_count);
        for (std::size_t c = 0; c < r_count; ++c) {
            int job = remaining[c];
            child_fronts[c] = extend_front(inst_, front, job);
            const CompletionFront& f = child_fronts[c];
            if (r_count == 1) {
                // The only extension completes the schedule.
                path_.push_back(job);
                evaluate_leaf(f[m_ - 1]);
                path_.pop_back();
                continue;
            }
            Time bound;
            if (opt_.bound == BoundKind::Machine) {
                bound = f[m_ - 1];
                for (int j = 0; j < m_; ++j) {
                    Time t = tail(job, j);
                    Time min_tail = (t == min1_[j] && min1n_[j] == 1) ? min2_[j] : min1_[j];
                    bound = std::max(bound, f[j] + (sums[j] - inst_.p(job, j)) + min_tail);
                }
            } else {
                std::vector<int> rest;
                rest.reserve(r_count - 1);
                for (std::size_t q = 0; q < r_count; ++q)
                    if (q != c) rest.push_back(remaining[q]);
                bound = lower_bound(inst_, f, rest, opt_.bound);
            }
            cands.push_back({bound, job, c});
        }
        if (r_count == 1) return;

        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.bound != b.bound) return a.bound < b.bound;
            return a.job < b.job;
        });

        for (const Candidate& cand : cands) {
            if (stopped_) return;
            if (cand.bound >= incumbent_) {
                // Sorted order: every later sibling is at least as bad.
                stats_.nodes_pruned += 1;
                continue;
            }
            int job = cand.job;
            path_.push_back(job);
            remaining.erase(std::lower_bound(remaining.begin(), remaining.end(), job));
            for (int j = 0; j < m_; ++j) sums[j] -= inst_.p(job, j);

            dfs(child_fronts[cand.slot], remaining, sums);

            for (int j = 0; j < m_; ++j) sums[j] += inst_.p(job, j);
            remaining.insert(std::lower_bound(remaining.begin(), remaining.end(), job), job);
            path_.pop_back();
        }
    }

    SolveResult finish() {
        SolveResult out;
        out.value = incumbent_;
        out.best = std::move(best_);
        out.stats = stats_;
        out.complete = !stopped_;
        return out;
    }

    const Instance& inst_;
    const SolveOptions& opt_;
    const int m_;
    std::vector<Time> tails_;
    std::vector<Time> min1_, min2_;
    std::vector<int> min1n_;
    Time incumbent_;
    Permutation path_;
    Permutation best_;
    SearchStats stats_;
    bool stopped_ = false;
};

}  // namespace

SolveResult solve_subtree(const Instance& inst, const Subproblem& root,
                          const SolveOptions& options) {
    return Search(inst, options).run(root);
}

SolveResult solve_sequential(const Instance& inst, const SolveOptions& options) {
    Subproblem root;  // empty prefix: the whole tree
    root.front = empty_front(inst);
    std::vector<int> all(inst.jobs);
    std::iota(all.begin(), all.end(), 0);
    root.bound = lower_bound(inst, root.front, all, options.bound);
    return Search(inst, options).run(root);
}

SolveResult brute_force(const Instance& inst) {
    if (inst.jobs > 9)
        throw std::invalid_argument("brute_force is a reference oracle, capped at 9 jobs");
    Permutation perm(inst.jobs);
    std::iota(perm.begin(), perm.end(), 0);
    SolveResult out;
    do {
        Time value = makespan(inst, perm);
        ++out.stats.leaves_evaluated;
        if (value < out.value) {  // strict: keeps the lexicographically first optimum
            out.value = value;
            out.best = perm;
            ++out.stats.improvements;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace flowbb
