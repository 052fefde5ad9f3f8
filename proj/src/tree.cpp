#include "flowbb/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowbb {

namespace {

void check_n(int n) {
    if (n < 1) throw std::invalid_argument("job count must be positive");
    if (n > kMaxJobs)
        throw CapacityError("id space for n > " + std::to_string(kMaxJobs) +
                            " jobs exceeds 128 bits (got n = " + std::to_string(n) + ")");
}

void check_floor(int n, int k) {
    check_n(n);
    if (k < 0 || k >= n)
        throw std::invalid_argument("floor must be in [0, n-1], got " + std::to_string(k));
}

}  // namespace

u128 falling_factorial(int n, int terms) {
    u128 out = 1;
    for (int i = 0; i < terms; ++i) out *= static_cast<u128>(n - i);
    return out;
}

u128 floor_size(int n, int k) {
    check_floor(n, k);
    return falling_factorial(n, k + 1);
}

u128 floor_offset(int n, int k) {
    check_floor(n, k);
    u128 off = 0;
    for (int i = 1; i <= k; ++i) off += falling_factorial(n, i);
    return off;
}

u128 leaves_below(int n, int k) {
    check_floor(n, k);
    u128 out = 1;
    for (int i = 2; i <= n - k - 1; ++i) out *= static_cast<u128>(i);
    return out;
}

u128 total_ids(int n) {
    check_n(n);
    u128 out = 0;
    for (int i = 1; i <= n; ++i) out += falling_factorial(n, i);
    return out;
}

u128 encode_id(int n, std::span<const int> prefix) {
    check_n(n);
    const int k = static_cast<int>(prefix.size()) - 1;
    if (k < 0 || k >= n)
        throw std::invalid_argument("prefix must fix between 1 and n jobs");
    std::vector<char> used(n, 0);
    u128 rank = 0;
    for (int t = 0; t <= k; ++t) {
        int j = prefix[t];
        if (j < 0 || j >= n || used[j])
            throw std::invalid_argument("prefix must be duplicate-free jobs in [0, n)");
        int below = 0;
        for (int q = 0; q < j; ++q) below += !used[q];
        // Prefixes that diverge at position t with a smaller job each head
        // a block of falling_factorial(n-1-t, k-t) floor-k prefixes.
        rank += static_cast<u128>(below) * falling_factorial(n - 1 - t, k - t);
        used[j] = 1;
    }
    return floor_offset(n, k) + rank;
}

int floor_of(int n, u128 id) {
    check_n(n);
    for (int k = 0; k < n; ++k) {
        u128 size = falling_factorial(n, k + 1);
        if (id < size) return k;
        id -= size;
    }
    throw CapacityError("id beyond the space for " + std::to_string(n) + " jobs");
}

Permutation decode_prefix(int n, u128 id) {
    const int k = floor_of(n, id);
    u128 rank = id - floor_offset(n, k);
    Permutation prefix;
    prefix.reserve(k + 1);
    std::vector<int> unused(n);
    for (int j = 0; j < n; ++j) unused[j] = j;
    for (int t = 0; t <= k; ++t) {
        u128 block = falling_factorial(n - 1 - t, k - t);
        auto pick = static_cast<std::size_t>(rank / block);
        rank %= block;
        prefix.push_back(unused[pick]);
        unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return prefix;
}

Subproblem materialize(const Instance& inst, u128 id, BoundKind kind) {
    Subproblem node;
    node.id = id;
    node.prefix = decode_prefix(inst.jobs, id);
    node.rank = id - floor_offset(inst.jobs, static_cast<int>(node.prefix.size()) - 1);
    node.front = empty_front(inst);
    std::vector<char> used(inst.jobs, 0);
    for (int j : node.prefix) {
        extend_front_inplace(inst, node.front, j);
        used[j] = 1;
    }
    std::vector<int> remaining;
    for (int j = 0; j < inst.jobs; ++j)
        if (!used[j]) remaining.push_back(j);
    node.bound = lower_bound(inst, node.front, remaining, kind);
    return node;
}

std::vector<Subproblem> children(const Instance& inst, const Subproblem& node, BoundKind kind) {
    const int n = inst.jobs;
    const int k = static_cast<int>(node.prefix.size()) - 1;
    if (k + 1 >= n) return {};  // the node is one job short of a leaf already

    std::vector<char> used(n, 0);
    for (int j : node.prefix) used[j] = 1;
    std::vector<int> remaining;
    for (int j = 0; j < n; ++j)
        if (!used[j]) remaining.push_back(j);

    // Each child appends one unused job; taking them in ascending job order
    // also yields ascending rank, since the rank step per unused-job slot is
    // the child floor's block size.
    std::vector<Subproblem> out;
    out.reserve(remaining.size());
    const u128 child_base =
        floor_offset(n, k + 1) + node.rank * static_cast<u128>(remaining.size());
    std::vector<int> rest(remaining.size() - 1);
    for (std::size_t c = 0; c < remaining.size(); ++c) {
        int job = remaining[c];
        Subproblem child;
        child.rank = node.rank * static_cast<u128>(remaining.size()) + c;
        child.id = child_base + c;
        child.prefix = node.prefix;
        child.prefix.push_back(job);
        child.front = extend_front(inst, node.front, job);
        std::size_t w = 0;
        for (std::size_t q = 0; q < remaining.size(); ++q)
            if (q != c) rest[w++] = remaining[q];
        child.bound = lower_bound(inst, child.front, rest, kind);
        out.push_back(std::move(child));
    }
    return out;
}

std::vector<u128> split_frontier(int n, int k, std::size_t max_particles) {
    u128 size = floor_size(n, k);
    if (size > static_cast<u128>(max_particles))
        throw CapacityError("floor " + std::to_string(k) + " holds " + to_string(size) +
                            " nodes, above the cap of " + std::to_string(max_particles));
    u128 first = floor_offset(n, k);
    std::vector<u128> ids;
    ids.reserve(static_cast<std::size_t>(size));
    for (u128 i = 0; i < size; ++i) ids.push_back(first + i);
    return ids;
}

}  // namespace flowbb
