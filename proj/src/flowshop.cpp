#include "flowbb/flowshop.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace flowbb {

Instance::Instance(int n, int m, std::vector<Time> times, std::string id)
    : jobs(n), machines(m), proc(std::move(times)), name(std::move(id)) {
    if (n < 1 || m < 1)
        throw std::invalid_argument("instance needs at least 1 job and 1 machine");
    if (proc.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(m))
        throw std::invalid_argument("processing-time matrix must have exactly n*m entries");
    for (Time t : proc)
        if (t < 0) throw std::invalid_argument("processing times must be non-negative");
}

bool is_complete_permutation(const Instance& inst, const Permutation& perm) {
    if (perm.size() != static_cast<std::size_t>(inst.jobs)) return false;
    std::vector<char> seen(inst.jobs, 0);
    for (int j : perm) {
        if (j < 0 || j >= inst.jobs || seen[j]) return false;
        seen[j] = 1;
    }
    return true;
}

Time makespan(const Instance& inst, const Permutation& perm) {
    if (!is_complete_permutation(inst, perm))
        throw std::invalid_argument("makespan requires a complete duplicate-free permutation");
    CompletionFront front = empty_front(inst);
    for (int job : perm) extend_front_inplace(inst, front, job);
    return front[inst.machines - 1];
}

CompletionFront empty_front(const Instance& inst) {
    return CompletionFront(inst.machines, 0);
}

void extend_front_inplace(const Instance& inst, CompletionFront& front, int job) {
    if (job < 0 || job >= inst.jobs) throw std::out_of_range("job index out of range");
    Time prev = 0;  // completion on the previous machine
    for (int k = 0; k < inst.machines; ++k) {
        prev = std::max(prev, front[k]) + inst.p(job, k);
        front[k] = prev;
    }
}

CompletionFront extend_front(const Instance& inst, const CompletionFront& front, int job) {
    CompletionFront next = front;
    extend_front_inplace(inst, next, job);
    return next;
}

Permutation johnson_order(const Instance& inst) {
    if (inst.machines != 2)
        throw std::invalid_argument("johnson_order is defined for exactly 2 machines");
    Permutation first, second;
    for (int j = 0; j < inst.jobs; ++j)
        (inst.p(j, 0) < inst.p(j, 1) ? first : second).push_back(j);
    std::sort(first.begin(), first.end(), [&](int a, int b) {
        if (inst.p(a, 0) != inst.p(b, 0)) return inst.p(a, 0) < inst.p(b, 0);
        return a < b;
    });
    std::sort(second.begin(), second.end(), [&](int a, int b) {
        if (inst.p(a, 1) != inst.p(b, 1)) return inst.p(a, 1) > inst.p(b, 1);
        return a < b;
    });
    first.insert(first.end(), second.begin(), second.end());
    return first;
}

BoundKind parse_bound_kind(const std::string& token) {
    if (token == "machine") return BoundKind::Machine;
    if (token == "two-machine" || token == "twomachine") return BoundKind::TwoMachine;
    throw std::invalid_argument("unknown bound kind: " + token);
}

std::string to_string(BoundKind kind) {
    return kind == BoundKind::Machine ? "machine" : "two-machine";
}

namespace {

Time machine_bound(const Instance& inst, const CompletionFront& front,
                   std::span<const int> remaining) {
    const int m = inst.machines;
    Time best = front[m - 1];
    // tail(r, j) accumulated right-to-left per candidate machine.
    for (int j = 0; j < m; ++j) {
        Time load = 0;
        Time min_tail = kNoIncumbent;
        for (int r : remaining) {
            load += inst.p(r, j);
            Time tail = 0;
            for (int k = j + 1; k < m; ++k) tail += inst.p(r, k);
            min_tail = std::min(min_tail, tail);
        }
        best = std::max(best, front[j] + load + min_tail);
    }
    return best;
}

// Two-machine relaxation for machine pair (a, b): only machines a and b
// retain capacity; the machines in between act as a pure transit lag
// lag(r) = sum_{a<k<b} p(r,k). The relaxed problem is solved exactly by
// Johnson's rule on (p_a + lag, lag + p_b); its makespan, evaluated with
// the pair's current front values as machine release times, plus the
// smallest remaining tail after b, lower-bounds every completion.
Time pair_bound(const Instance& inst, const CompletionFront& front,
                std::span<const int> remaining, int a, int b) {
    const int m = inst.machines;
    struct Job {
        int id;
        Time head, lag, tail_after_b;
    };
    std::vector<Job> jobs;
    jobs.reserve(remaining.size());
    Time min_tail = kNoIncumbent;
    for (int r : remaining) {
        Time lag = 0;
        for (int k = a + 1; k < b; ++k) lag += inst.p(r, k);
        Time tail = 0;
        for (int k = b + 1; k < m; ++k) tail += inst.p(r, k);
        min_tail = std::min(min_tail, tail);
        jobs.push_back({r, inst.p(r, a), lag, tail});
    }
    auto key1 = [&](const Job& j) { return j.head + j.lag; };
    auto key2 = [&](const Job& j) { return j.lag + inst.p(j.id, b); };
    std::sort(jobs.begin(), jobs.end(), [&](const Job& x, const Job& y) {
        bool x_first = key1(x) < key2(x);
        bool y_first = key1(y) < key2(y);
        if (x_first != y_first) return x_first;
        if (x_first) {
            if (key1(x) != key1(y)) return key1(x) < key1(y);
        } else {
            if (key2(x) != key2(y)) return key2(x) > key2(y);
        }
        return x.id < y.id;
    });
    Time ca = front[a];
    Time cb = front[b];
    for (const Job& j : jobs) {
        ca += j.head;
        cb = std::max(ca + j.lag, cb) + inst.p(j.id, b);
    }
    return cb + min_tail;
}

}  // namespace

Time lower_bound(const Instance& inst, const CompletionFront& front,
                 std::span<const int> remaining, BoundKind kind) {
    const int m = inst.machines;
    if (remaining.empty()) return front[m - 1];
    Time best = machine_bound(inst, front, remaining);
    if (kind == BoundKind::TwoMachine) {
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                best = std::max(best, pair_bound(inst, front, remaining, a, b));
    }
    return best;
}

namespace {

// Box-Muller over mt19937_64 with a fixed 53-bit uniform mapping; pinned
// here (rather than std::normal_distribution) so generated instances are
// bit-identical across standard libraries.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next(double mean, double stddev) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + stddev * spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return mean + stddev * radius * std::cos(angle);
    }

private:
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

Instance generate_random(int n, int m, double mean, double stddev, std::uint64_t seed) {
    if (n < 1 || m < 1) throw std::invalid_argument("generate_random needs n, m >= 1");
    if (stddev < 0) throw std::invalid_argument("stddev must be non-negative");
    NormalSampler sampler(seed);
    std::vector<Time> times(static_cast<std::size_t>(n) * m);
    for (Time& t : times) {
        double draw = sampler.next(mean, stddev);
        t = std::max<Time>(1, static_cast<Time>(std::llround(draw)));
    }
    std::string name = "rand-n" + std::to_string(n) + "-m" + std::to_string(m) +
                       "-s" + std::to_string(seed);
    return Instance(n, m, std::move(times), std::move(name));
}

}  // namespace flowbb
